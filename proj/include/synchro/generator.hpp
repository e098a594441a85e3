#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "synchro/automaton.hpp"
#include "synchro/bit_matrix.hpp"
#include "synchro/extract_perm.hpp"
#include "synchro/matrix_set.hpp"
#include "synchro/partition.hpp"
#include "synchro/primitivity.hpp"
#include "synchro/random.hpp"

namespace synchro {

/// Uniform equal-block partition: shuffle the states and cut the shuffled
/// order into q consecutive chunks of n/q.
inline EqualPartition sample_equal_partition(std::size_t n, std::size_t q,
                                             Rng& rng) {
  if (q < 2 || n % q != 0) {
    throw InvalidInput("q = " + std::to_string(q) + " does not divide n = " +
                       std::to_string(n) + " into two or more blocks");
  }
  const auto order = rng.permutation<State>(n);
  std::vector<State> block_of(n);
  const std::size_t size = n / q;
  for (std::size_t pos = 0; pos < n; ++pos) {
    block_of[order[pos]] = static_cast<State>(pos / size);
  }
  return EqualPartition(std::move(block_of));
}

/// Submatrix on the given rows and columns, in the given orders.
inline BinaryMatrix submatrix(const BinaryMatrix& m,
                              const std::vector<std::size_t>& rows,
                              const std::vector<std::size_t>& cols) {
  BinaryMatrix out(rows.size());
  for (std::size_t a = 0; a < rows.size(); ++a) {
    for (std::size_t b = 0; b < cols.size(); ++b) {
      if (m.get(rows[a], cols[b])) out.set(a, b);
    }
  }
  return out;
}

struct DomPermResult {
  std::vector<State> sigma;  // block i -> block sigma[i]
  BinaryMatrix masked;       // m restricted to the blocks (i, sigma[i])
};

/// Block permutation compatible with m on p: every block (i, sigma(i)) of m
/// dominates a permutation. The q x q block indicator is built first; sigma
/// is then extracted from it with `method`.
inline std::optional<DomPermResult> dom_perm(const BinaryMatrix& m,
                                             const EqualPartition& p,
                                             ExtractMethod method, Rng& rng) {
  require_same_dimension(m.n(), p.n());
  const std::size_t q = p.q();
  std::vector<std::vector<std::size_t>> members(q);
  for (std::size_t l = 0; l < q; ++l) members[l] = p.members(l);

  BinaryMatrix indicator(q);
  for (std::size_t i = 0; i < q; ++i) {
    for (std::size_t k = 0; k < q; ++k) {
      // Presence does not depend on the extraction method.
      if (extract_perm(submatrix(m, members[i], members[k]),
                       ExtractMethod::Deterministic)) {
        indicator.set(i, k);
      }
    }
  }
  auto sigma = extract_perm(indicator, method, &rng);
  if (!sigma) return std::nullopt;

  BinaryMatrix masked(m.n());
  for (std::size_t r = 0; r < m.n(); ++r) {
    const State target = (*sigma)[p.block_of(r)];
    for (std::size_t c : m.row_support(r)) {
      if (p.block_of(c) == target) masked.set(r, c);
    }
  }
  return DomPermResult{sigma->image(), std::move(masked)};
}

inline constexpr std::size_t kDefaultAddoneCap = 1'000'000;

/// Flips one 0-entry of one permutation to 1 while keeping every recorded
/// block-permutation structure of that matrix. The matrix is drawn
/// uniformly once; candidate 0-entries are drawn uniformly until one lies in
/// block (b, sigma(b)) of every structure that constrains the matrix.
inline MatrixSet addone(const std::vector<Permutation>& perms,
                        const std::vector<RecordedStructure>& structures,
                        Rng& rng, std::size_t cap = kDefaultAddoneCap) {
  if (perms.empty()) throw InvalidInput("no permutations");
  const std::size_t n = perms.front().n();
  if (n < 2) throw InvalidInput("n = 1 has no 0-entry");
  const std::size_t k = static_cast<std::size_t>(rng.below(perms.size()));

  for (std::size_t attempt = 0; attempt < cap; ++attempt) {
    const std::size_t r = static_cast<std::size_t>(rng.below(n));
    std::size_t c = static_cast<std::size_t>(rng.below(n - 1));
    if (c >= perms[k][r]) ++c;
    bool ok = true;
    for (const auto& st : structures) {
      if (st.excluded == k) continue;
      const auto& sigma = st.sigmas.at(k);
      if (!sigma || st.block_of[c] != (*sigma)[st.block_of[r]]) {
        ok = false;
        break;
      }
    }
    if (!ok) continue;

    std::vector<BinaryMatrix> ms;
    for (const auto& p : perms) ms.push_back(p.to_matrix());
    ms[k].set(r, c);
    return MatrixSet(std::move(ms),
                     GeneratorMeta{structures, Perturbation{k, r, c}});
  }
  throw CapExhausted("no compatible 0-entry after " + std::to_string(cap) +
                     " draws");
}

struct GeneratorConfig {
  std::vector<std::size_t> primes;  // q_1, ..., q_m; n is their product
  std::size_t t1 = 1000;            // partition draws allowed per j
  ExtractMethod method = ExtractMethod::Deterministic;
  std::uint64_t seed = 0;

  std::size_t n() const {
    std::size_t n = 1;
    for (std::size_t q : primes) n *= q;
    return n;
  }

  void validate() const {
    if (primes.size() < 2) throw InvalidInput("need at least two factors");
    std::size_t n = 1;
    for (std::size_t q : primes) {
      if (q < 2) throw InvalidInput("every factor must be >= 2");
      if (n > max_dimension() / q) throw DimensionError("product of factors too large");
      n *= q;
    }
    check_dimension(n);
  }
};

struct GeneratorOutcome {
  bool converged = false;
  std::optional<MatrixSet> set;
  std::optional<PrimitivityVerdict> verdict;
};

/// Randomized construction of a perturbed-permutation set whose every
/// (m-1)-subset has a block-permutation structure, hence minimally
/// primitive whenever primitive.
///
/// Matrices start all-ones. For each j a q_j-partition is drawn (at most t1
/// times) until every M_k, k != j, admits a compatible block permutation;
/// only then are the masked matrices committed. Afterwards a permutation is
/// extracted from each matrix, one compatible 0-entry is flipped, and the
/// result is classified.
inline GeneratorOutcome minimal_primitive_search(const GeneratorConfig& cfg,
                                                 Rng& rng) {
  cfg.validate();
  const std::size_t m = cfg.primes.size();
  const std::size_t n = cfg.n();
  std::vector<BinaryMatrix> current(m, BinaryMatrix::ones(n));
  std::vector<RecordedStructure> structures;

  for (std::size_t j = 0; j < m; ++j) {
    bool committed = false;
    for (std::size_t t = 0; t < cfg.t1 && !committed; ++t) {
      const EqualPartition part = sample_equal_partition(n, cfg.primes[j], rng);
      std::vector<std::optional<DomPermResult>> found(m);
      bool all = true;
      for (std::size_t k = 0; k < m && all; ++k) {
        if (k == j) continue;
        found[k] = dom_perm(current[k], part, cfg.method, rng);
        all = found[k].has_value();
      }
      if (!all) continue;

      RecordedStructure st;
      st.excluded = j;
      st.q = cfg.primes[j];
      st.block_of = part.labels();
      st.sigmas.resize(m);
      for (std::size_t k = 0; k < m; ++k) {
        if (k == j) continue;
        current[k] = std::move(found[k]->masked);
        st.sigmas[k] = std::move(found[k]->sigma);
      }
      structures.push_back(std::move(st));
      committed = true;
    }
    if (!committed) return GeneratorOutcome{};
  }

  std::vector<Permutation> perms;
  for (const auto& mk : current) {
    auto p = extract_perm(mk, cfg.method, &rng);
    if (!p) throw std::logic_error("committed matrix dominates no permutation");
    perms.push_back(std::move(*p));
  }
  GeneratorOutcome out;
  out.converged = true;
  out.set = addone(perms, structures, rng);
  out.verdict = is_primitive(*out.set);
  return out;
}

inline GeneratorOutcome minimal_primitive_search(const GeneratorConfig& cfg) {
  Rng rng(cfg.seed);
  return minimal_primitive_search(cfg, rng);
}

/// Uniform map of image size n-1: a uniform pair {a, b} is merged, and the
/// n-1 resulting classes are sent injectively and uniformly into [n].
inline Letter sample_merging_letter(std::size_t n, Rng& rng) {
  if (n < 2) throw InvalidInput("merging letter needs n >= 2");
  const std::size_t a = static_cast<std::size_t>(rng.below(n));
  std::size_t b = static_cast<std::size_t>(rng.below(n - 1));
  if (b >= a) ++b;
  const std::size_t lo = std::min(a, b), hi = std::max(a, b);
  const auto targets = rng.permutation<State>(n);  // first n-1 used
  Letter f(n);
  std::size_t cls = 0;
  for (std::size_t s = 0; s < n; ++s) {
    if (s == hi) continue;
    f[s] = targets[cls++];
  }
  f[hi] = f[lo];
  return f;
}

/// Baseline sampler: `letters - 1` uniform permutations followed by one
/// uniform letter of rank n-1, as binary row-stochastic matrices.
inline MatrixSet sample_uniform_merging_set(std::size_t n, std::size_t letters,
                                            Rng& rng) {
  if (n < 2) throw InvalidInput("n must be >= 2");
  if (letters < 2) throw InvalidInput("need at least two letters");
  std::vector<BinaryMatrix> ms;
  for (std::size_t k = 0; k + 1 < letters; ++k) {
    ms.push_back(Permutation(rng.permutation<State>(n)).to_matrix());
  }
  ms.push_back(Automaton::letter_matrix(sample_merging_letter(n, rng)));
  return MatrixSet(std::move(ms));
}

/// Automaton whose letters are the rows-to-column maps of binary
/// row-stochastic matrices.
inline Automaton automaton_from_stochastic(const MatrixSet& s) {
  std::vector<Letter> letters;
  for (const auto& m : s) {
    Letter f(m.n());
    for (std::size_t i = 0; i < m.n(); ++i) {
      if (m.row_count(i) != 1) throw InvalidInput("matrix is not row-stochastic");
      f[i] = static_cast<State>(m.row_support(i).front());
    }
    letters.push_back(std::move(f));
  }
  return Automaton(s.n(), std::move(letters));
}

/// m uniform permutations; one of them, chosen uniformly, gets a uniformly
/// chosen 0-entry flipped to 1.
inline MatrixSet sample_perturbed_permutation_set(std::size_t n, std::size_t m,
                                                  Rng& rng) {
  if (n < 2 || m < 2) throw InvalidInput("need n >= 2 and m >= 2");
  std::vector<Permutation> perms;
  for (std::size_t k = 0; k < m; ++k) perms.emplace_back(rng.permutation<State>(n));
  const std::size_t k = static_cast<std::size_t>(rng.below(m));
  const std::size_t r = static_cast<std::size_t>(rng.below(n));
  std::size_t c = static_cast<std::size_t>(rng.below(n - 1));
  if (c >= perms[k][r]) ++c;
  std::vector<BinaryMatrix> ms;
  for (const auto& p : perms) ms.push_back(p.to_matrix());
  ms[k].set(r, c);
  return MatrixSet(std::move(ms), GeneratorMeta{{}, Perturbation{k, r, c}});
}

/// m independent matrices with i.i.d. Bernoulli(p) entries.
inline MatrixSet random_binary_set(std::size_t n, std::size_t m, double p,
                                   Rng& rng) {
  if (!(p >= 0.0 && p <= 1.0)) throw InvalidInput("p must lie in [0, 1]");
  if (m < 1) throw InvalidInput("need at least one matrix");
  std::vector<BinaryMatrix> ms;
  for (std::size_t k = 0; k < m; ++k) {
    BinaryMatrix b(n);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        if (rng.bernoulli(p)) b.set(i, j);
      }
    }
    ms.push_back(std::move(b));
  }
  return MatrixSet(std::move(ms));
}

}  // namespace synchro
