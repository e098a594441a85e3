#pragma once

// Hand-rolled generators for property tests. Every generator draws from a
// caller-owned Rng so a failing case can be replayed from its seed.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <optional>
#include <set>
#include <vector>

#include "synchro/synchro.hpp"

namespace synchro::testing {

inline BinaryMatrix random_matrix(std::size_t n, double density, Rng& rng) {
  BinaryMatrix m(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (rng.bernoulli(density)) m.set(i, j);
    }
  }
  return m;
}

/// Random matrix forced NZ by planting a random permutation.
inline BinaryMatrix random_nz_matrix(std::size_t n, double density, Rng& rng) {
  BinaryMatrix m = random_matrix(n, density, rng);
  const auto p = rng.permutation<State>(n);
  for (std::size_t i = 0; i < n; ++i) m.set(i, p[i]);
  return m;
}

/// NZ matrix that is not forced to dominate a permutation: every row and
/// column receives at least one 1, placed independently.
inline BinaryMatrix random_loose_nz_matrix(std::size_t n, double density, Rng& rng) {
  BinaryMatrix m = random_matrix(n, density, rng);
  for (std::size_t i = 0; i < n; ++i) {
    if (m.row_count(i) == 0) m.set(i, rng.below(n));
  }
  const BinaryMatrix t = m.transposed();
  for (std::size_t j = 0; j < n; ++j) {
    if (t.row_count(j) == 0) m.set(rng.below(n), j);
  }
  return m;
}

inline MatrixSet random_nz_set(std::size_t n, std::size_t m, double density, Rng& rng) {
  std::vector<BinaryMatrix> ms;
  for (std::size_t k = 0; k < m; ++k) ms.push_back(random_loose_nz_matrix(n, density, rng));
  return MatrixSet(std::move(ms));
}

inline Automaton random_automaton(std::size_t n, std::size_t m, Rng& rng) {
  std::vector<Letter> letters(m, Letter(n));
  for (auto& f : letters) {
    for (auto& x : f) x = static_cast<State>(rng.below(n));
  }
  return Automaton(n, std::move(letters));
}

/// Every matrix of dimension n (n*n <= 16), in counting order.
inline std::vector<BinaryMatrix> all_matrices(std::size_t n) {
  std::vector<BinaryMatrix> out;
  const std::size_t cells = n * n;
  for (std::uint64_t code = 0; code < (std::uint64_t{1} << cells); ++code) {
    BinaryMatrix m(n);
    for (std::size_t c = 0; c < cells; ++c) {
      if ((code >> c) & 1) m.set(c / n, c % n);
    }
    out.push_back(std::move(m));
  }
  return out;
}

/// All permutations dominated by m, by enumeration of S_n.
inline std::set<std::vector<State>> dominated_permutations(const BinaryMatrix& m) {
  std::set<std::vector<State>> out;
  std::vector<State> p(m.n());
  std::iota(p.begin(), p.end(), State{0});
  do {
    bool ok = true;
    for (std::size_t i = 0; i < p.size() && ok; ++i) ok = m.get(i, p[i]);
    if (ok) out.insert(p);
  } while (std::next_permutation(p.begin(), p.end()));
  return out;
}

/// Textbook triple-loop boolean product.
inline BinaryMatrix naive_product(const BinaryMatrix& a, const BinaryMatrix& b) {
  BinaryMatrix out(a.n());
  for (std::size_t i = 0; i < a.n(); ++i) {
    for (std::size_t j = 0; j < a.n(); ++j) {
      for (std::size_t k = 0; k < a.n(); ++k) {
        if (a.get(i, k) && b.get(k, j)) {
          out.set(i, j);
          break;
        }
      }
    }
  }
  return out;
}

/// Pearson statistic of observed counts against a uniform expectation.
inline double chi_square_uniform(const std::vector<std::size_t>& counts) {
  std::size_t total = 0;
  for (std::size_t c : counts) total += c;
  const double expected = static_cast<double>(total) / counts.size();
  double stat = 0.0;
  for (std::size_t c : counts) {
    const double d = static_cast<double>(c) - expected;
    stat += d * d / expected;
  }
  return stat;
}

/// Semigroup-definition primitivity for tiny sets: BFS over all products.
inline bool primitive_by_products(const MatrixSet& s) {
  return exponent_bruteforce(s, 10'000).has_value();
}

inline MatrixSet example_set() {
  return MatrixSet({BinaryMatrix::from_dense({{0, 1, 0}, {1, 0, 0}, {0, 0, 1}}),
                    BinaryMatrix::from_dense({{1, 0, 1}, {0, 0, 1}, {0, 1, 0}})});
}

/// Cerny automaton: a cyclic shift and a letter merging state n-1 into 0.
inline Automaton cerny(std::size_t n) {
  Letter shift(n), merge(n);
  for (std::size_t s = 0; s < n; ++s) {
    shift[s] = static_cast<State>((s + 1) % n);
    merge[s] = static_cast<State>(s);
  }
  merge[n - 1] = 0;
  return Automaton(n, {shift, merge});
}

}  // namespace synchro::testing
