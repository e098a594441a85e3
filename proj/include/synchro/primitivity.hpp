#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_set>
#include <utility>
#include <vector>

#include "synchro/automaton.hpp"
#include "synchro/bit_matrix.hpp"
#include "synchro/matrix_set.hpp"
#include "synchro/partition.hpp"
#include "synchro/square_graph.hpp"

namespace synchro {

enum class PrimitivityClass { Reducible, Imprimitive, Primitive };

inline const char* to_string(PrimitivityClass c) {
  switch (c) {
    case PrimitivityClass::Reducible:
      return "reducible";
    case PrimitivityClass::Imprimitive:
      return "imprimitive";
    case PrimitivityClass::Primitive:
      return "primitive";
  }
  return "?";
}

/// A partition on which every matrix of a set permutes the blocks;
/// sigmas[k][l] is the block receiving block l under matrix k.
struct BlockStructure {
  Partition partition;
  std::vector<std::vector<State>> sigmas;
};

struct PrimitivityVerdict {
  PrimitivityClass cls = PrimitivityClass::Primitive;
  /// Reducible: (u, v) with no path from u to v in the digraph of the sum.
  std::optional<std::pair<std::size_t, std::size_t>> unreachable;
  /// Imprimitive: a block-permutation structure.
  std::optional<BlockStructure> structure;

  bool primitive() const { return cls == PrimitivityClass::Primitive; }
};

namespace detail {

inline std::vector<bool> reach_from(const BinaryMatrix& adj, std::size_t src) {
  std::vector<bool> seen(adj.n(), false);
  std::vector<std::size_t> queue{src};
  seen[src] = true;
  for (std::size_t head = 0; head < queue.size(); ++head) {
    for (std::size_t j : adj.row_support(queue[head])) {
      if (!seen[j]) {
        seen[j] = true;
        queue.push_back(j);
      }
    }
  }
  return seen;
}

/// First (u, v) without a u -> v path, or absent when strongly connected.
inline std::optional<std::pair<std::size_t, std::size_t>> unreachable_pair(
    const BinaryMatrix& adj) {
  const auto fwd = reach_from(adj, 0);
  for (std::size_t v = 0; v < adj.n(); ++v) {
    if (!fwd[v]) return std::pair{std::size_t{0}, v};
  }
  const auto bwd = reach_from(adj.transposed(), 0);
  for (std::size_t v = 0; v < adj.n(); ++v) {
    if (!bwd[v]) return std::pair{v, std::size_t{0}};
  }
  return std::nullopt;
}

inline void require_nz(const MatrixSet& s) {
  if (!s.all_nz()) throw InvalidInput("set contains a matrix that is not NZ");
}

/// Block map of one matrix on a labelling, or absent if some block spreads
/// over several blocks or two blocks collide.
inline std::optional<std::vector<State>> block_map(
    const std::vector<std::vector<std::size_t>>& succ,
    const std::vector<State>& block_of, std::size_t k) {
  constexpr State kUnset = static_cast<State>(-1);
  std::vector<State> sigma(k, kUnset);
  for (std::size_t i = 0; i < succ.size(); ++i) {
    State& t = sigma[block_of[i]];
    for (std::size_t j : succ[i]) {
      if (t == kUnset) {
        t = block_of[j];
      } else if (t != block_of[j]) {
        return std::nullopt;
      }
    }
  }
  std::vector<bool> hit(k, false);
  for (State t : sigma) {
    if (t == kUnset || hit[t]) return std::nullopt;
    hit[t] = true;
  }
  return sigma;
}

inline std::vector<std::vector<std::vector<std::size_t>>> successor_lists(
    const MatrixSet& s) {
  std::vector<std::vector<std::vector<std::size_t>>> out;
  for (const auto& m : s) {
    std::vector<std::vector<std::size_t>> rows(m.n());
    for (std::size_t i = 0; i < m.n(); ++i) rows[i] = m.row_support(i);
    out.push_back(std::move(rows));
  }
  return out;
}

inline std::optional<std::vector<std::vector<State>>> block_maps(
    const std::vector<std::vector<std::vector<std::size_t>>>& succ,
    const std::vector<State>& block_of, std::size_t k) {
  std::vector<std::vector<State>> sigmas;
  for (const auto& rows : succ) {
    auto sigma = block_map(rows, block_of, k);
    if (!sigma) return std::nullopt;
    sigmas.push_back(std::move(*sigma));
  }
  return sigmas;
}

class UnionFind {
 public:
  explicit UnionFind(std::size_t n) : parent_(n) {
    std::iota(parent_.begin(), parent_.end(), std::size_t{0});
  }
  std::size_t find(std::size_t x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }
  bool unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    parent_[std::max(a, b)] = std::min(a, b);
    return true;
  }

 private:
  std::vector<std::size_t> parent_;
};

/// Smallest partition merging a and b that every matrix and every transpose
/// maps block-to-block. For an NZ set the induced block maps are
/// permutations.
inline std::vector<State> congruence_closure(
    const std::vector<std::vector<std::vector<std::size_t>>>& adjacency,
    std::size_t n, std::size_t a, std::size_t b) {
  UnionFind uf(n);
  uf.unite(a, b);
  constexpr std::size_t kNone = static_cast<std::size_t>(-1);
  std::vector<std::size_t> image(n);
  for (bool changed = true; changed;) {
    changed = false;
    for (const auto& rows : adjacency) {
      std::fill(image.begin(), image.end(), kNone);
      for (std::size_t i = 0; i < n; ++i) {
        std::size_t& t = image[uf.find(i)];
        for (std::size_t j : rows[i]) {
          if (t == kNone) {
            t = j;
          } else if (uf.unite(t, j)) {
            changed = true;
          }
        }
      }
    }
  }
  std::vector<State> label(n);
  std::vector<State> root_label(n, static_cast<State>(-1));
  State next = 0;
  for (std::size_t i = 0; i < n; ++i) {
    State& r = root_label[uf.find(i)];
    if (r == static_cast<State>(-1)) r = next++;
    label[i] = r;
  }
  return label;
}

}  // namespace detail

/// The digraph of the boolean sum of the set is strongly connected.
inline bool is_irreducible(const MatrixSet& s) {
  return !detail::unreachable_pair(s.sum()).has_value();
}

/// Block permutations of every matrix on `p`, or absent if some matrix has
/// no block-permutation structure there.
inline std::optional<std::vector<std::vector<State>>> has_block_permutation_on(
    const MatrixSet& s, const Partition& p) {
  detail::require_nz(s);
  require_same_dimension(s.n(), p.n());
  return detail::block_maps(detail::successor_lists(s), p.labels(), p.blocks());
}

inline constexpr std::size_t kBruteForceMaxN = 12;

/// Exhaustive search over set partitions with at least two blocks, in
/// lexicographic order of restricted growth strings; returns the first one
/// carrying a block-permutation structure. `equal_only` restricts the search
/// to partitions whose blocks all have the same size.
inline std::optional<BlockStructure> find_block_permutation_bruteforce(
    const MatrixSet& s, bool equal_only) {
  const std::size_t n = s.n();
  if (n > kBruteForceMaxN) {
    throw DimensionError("brute-force partition search needs n <= " +
                         std::to_string(kBruteForceMaxN));
  }
  detail::require_nz(s);
  if (n < 2) return std::nullopt;
  const auto succ = detail::successor_lists(s);

  std::vector<State> rgs(n, 0);
  std::vector<std::size_t> sizes(n + 1, 0);
  std::optional<BlockStructure> found;

  // Largest admissible block when sizes must be equal: n/2.
  const std::size_t max_block = equal_only ? n / 2 : n - 1;

  std::function<void(std::size_t, std::size_t)> rec = [&](std::size_t i,
                                                          std::size_t k) {
    if (found) return;
    if (i == n) {
      if (k < 2) return;
      if (equal_only) {
        for (std::size_t b = 0; b < k; ++b) {
          if (sizes[b] != n / k || n % k != 0) return;
        }
      }
      if (auto sig = detail::block_maps(succ, rgs, k)) {
        found = BlockStructure{Partition(rgs), std::move(*sig)};
      }
      return;
    }
    for (std::size_t b = 0; b <= k && b < n; ++b) {
      if (sizes[b] + 1 > max_block) continue;
      rgs[i] = static_cast<State>(b);
      ++sizes[b];
      rec(i + 1, b == k ? k + 1 : k);
      --sizes[b];
      if (found) return;
    }
  };
  rgs[0] = 0;
  sizes[0] = 1;
  rec(1, 1);
  return found;
}

/// A block-permutation structure of an irreducible NZ set that is not
/// primitive, found by closing each pair {a, b} under the set and its
/// transposes. Falls back to the partition into singletons when every
/// matrix is a permutation. Polynomial in n.
inline std::optional<BlockStructure> find_block_structure(const MatrixSet& s) {
  detail::require_nz(s);
  const std::size_t n = s.n();
  if (n < 2) return std::nullopt;
  const auto succ = detail::successor_lists(s);
  auto adjacency = succ;
  for (const auto& rows : detail::successor_lists(s.transposed())) {
    adjacency.push_back(rows);
  }
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = a + 1; b < n; ++b) {
      auto label = detail::congruence_closure(adjacency, n, a, b);
      const std::size_t k =
          static_cast<std::size_t>(*std::max_element(label.begin(), label.end())) + 1;
      if (k < 2) continue;
      if (auto sig = detail::block_maps(succ, label, k)) {
        return BlockStructure{Partition(std::move(label)), std::move(*sig)};
      }
    }
  }
  std::vector<State> discrete(n);
  std::iota(discrete.begin(), discrete.end(), State{0});
  if (auto sig = detail::block_maps(succ, discrete, n)) {
    return BlockStructure{Partition(std::move(discrete)), std::move(*sig)};
  }
  return std::nullopt;
}

/// Reducible if the sum is not irreducible; otherwise primitive iff the
/// associated automaton synchronizes. Requires every matrix to be NZ.
inline PrimitivityVerdict is_primitive(const MatrixSet& s) {
  detail::require_nz(s);
  PrimitivityVerdict v;
  if (auto gap = detail::unreachable_pair(s.sum())) {
    v.cls = PrimitivityClass::Reducible;
    v.unreachable = gap;
    return v;
  }
  if (associated_automaton_synchronizes(s)) {
    v.cls = PrimitivityClass::Primitive;
    return v;
  }
  v.cls = PrimitivityClass::Imprimitive;
  v.structure = find_block_structure(s);
  if (!v.structure) {
    throw std::logic_error("imprimitive set without block structure");
  }
  return v;
}

/// Primitive, and no subset obtained by dropping one matrix is.
inline bool is_minimally_primitive(const MatrixSet& s) {
  if (s.size() < 2) throw InvalidInput("minimal primitivity needs |s| >= 2");
  if (!is_primitive(s).primitive()) return false;
  for (std::size_t k = 0; k < s.size(); ++k) {
    if (is_primitive(s.without(k)).primitive()) return false;
  }
  return true;
}

inline constexpr std::size_t kDefaultProductCap = std::size_t{1} << 24;

/// Exponent by breadth-first search over distinct products, by length.
/// Returns the length of the first all-ones product; absent when the
/// semigroup closes without one. Throws CapExhausted when `max_length` or
/// `product_cap` is reached first.
inline std::optional<std::size_t> exponent_bruteforce(
    const MatrixSet& s, std::size_t max_length,
    std::size_t product_cap = kDefaultProductCap) {
  const std::size_t n = s.n();
  if (n <= 8) {
    // Rows packed as bytes; one 256-entry row table per matrix.
    using Packed = std::uint64_t;
    std::vector<std::array<std::uint8_t, 256>> table(s.size());
    std::vector<Packed> gens;
    for (std::size_t k = 0; k < s.size(); ++k) {
      Packed g = 0;
      for (std::size_t i = 0; i < n; ++i) {
        g |= static_cast<Packed>(s[k].row(i)[0]) << (8 * i);
      }
      gens.push_back(g);
      for (unsigned r = 0; r < 256; ++r) {
        std::uint8_t acc = 0;
        for (std::size_t i = 0; i < n; ++i) {
          if ((r >> i) & 1U) acc |= static_cast<std::uint8_t>(s[k].row(i)[0]);
        }
        table[k][r] = acc;
      }
    }
    Packed full = 0;
    for (std::size_t i = 0; i < n; ++i) {
      full |= static_cast<Packed>((1U << n) - 1) << (8 * i);
    }
    std::unordered_set<Packed> seen;
    std::vector<Packed> frontier, next;
    for (Packed g : gens) {
      if (g == full) return 1;
      if (seen.insert(g).second) frontier.push_back(g);
    }
    for (std::size_t len = 2; !frontier.empty(); ++len) {
      if (len > max_length) throw CapExhausted("exponent search reached max length");
      next.clear();
      for (Packed x : frontier) {
        for (std::size_t k = 0; k < s.size(); ++k) {
          Packed y = 0;
          for (std::size_t i = 0; i < n; ++i) {
            y |= static_cast<Packed>(table[k][(x >> (8 * i)) & 0xFFU]) << (8 * i);
          }
          if (y == full) return len;
          if (seen.insert(y).second) {
            if (seen.size() > product_cap) {
              throw CapExhausted("exponent search reached product cap");
            }
            next.push_back(y);
          }
        }
      }
      frontier.swap(next);
    }
    return std::nullopt;
  }

  std::unordered_set<std::string> seen;
  std::vector<BinaryMatrix> frontier, next;
  for (const auto& g : s) {
    if (g.is_all_ones()) return 1;
    if (seen.insert(g.key()).second) frontier.push_back(g);
  }
  for (std::size_t len = 2; !frontier.empty(); ++len) {
    if (len > max_length) throw CapExhausted("exponent search reached max length");
    next.clear();
    for (const auto& x : frontier) {
      for (const auto& g : s) {
        BinaryMatrix y = bool_product(x, g);
        if (y.is_all_ones()) return len;
        if (seen.insert(y.key()).second) {
          if (seen.size() > product_cap) {
            throw CapExhausted("exponent search reached product cap");
          }
          next.push_back(std::move(y));
        }
      }
    }
    frontier.swap(next);
  }
  return std::nullopt;
}

}  // namespace synchro
