#pragma once

#include <bit>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <unordered_map>
#include <vector>

#include "synchro/automaton.hpp"
#include "synchro/square_graph.hpp"

namespace synchro {

inline constexpr std::size_t kDefaultSubsetCap = std::size_t{1} << 26;

namespace detail {

/// Open-addressing set of nonzero 64-bit keys.
class SubsetSet {
 public:
  SubsetSet() : slots_(1024, 0) {}

  std::size_t size() const { return size_; }

  /// True if inserted, false if already present.
  bool insert(std::uint64_t key) {
    if ((size_ + 1) * 2 > slots_.size()) grow();
    if (!place(slots_, key)) return false;
    ++size_;
    return true;
  }

 private:
  static std::uint64_t mix(std::uint64_t x) {
    x ^= x >> 33;
    x *= 0xff51afd7ed558ccdULL;
    x ^= x >> 33;
    x *= 0xc4ceb9fe1a85ec53ULL;
    x ^= x >> 33;
    return x;
  }

  static bool place(std::vector<std::uint64_t>& slots, std::uint64_t key) {
    const std::size_t mask = slots.size() - 1;
    for (std::size_t h = mix(key) & mask;; h = (h + 1) & mask) {
      if (slots[h] == key) return false;
      if (slots[h] == 0) {
        slots[h] = key;
        return true;
      }
    }
  }

  void grow() {
    std::vector<std::uint64_t> bigger(slots_.size() * 2, 0);
    for (std::uint64_t k : slots_) {
      if (k != 0) place(bigger, k);
    }
    slots_.swap(bigger);
  }

  std::vector<std::uint64_t> slots_;
  std::size_t size_ = 0;
};

inline std::uint64_t apply_letter(const Letter& f, std::uint64_t subset) {
  std::uint64_t image = 0;
  for (std::uint64_t bits = subset; bits != 0; bits &= bits - 1) {
    image |= std::uint64_t{1} << f[static_cast<std::size_t>(std::countr_zero(bits))];
  }
  return image;
}

inline void require_subset_encodable(const Automaton& a) {
  if (a.n() > 64) {
    throw DimensionError("exact reset threshold needs n <= 64");
  }
}

inline std::uint64_t full_set(std::size_t n) {
  return n == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << n) - 1;
}

}  // namespace detail

/// Length of a shortest synchronizing word, by breadth-first search over the
/// subsets reachable from the full state set. Absent when the automaton is
/// not synchronizing; throws CapExhausted once `subset_cap` subsets have
/// been visited without reaching a singleton.
inline std::optional<std::size_t> reset_threshold_exact(
    const Automaton& a, std::size_t subset_cap = kDefaultSubsetCap) {
  detail::require_subset_encodable(a);
  if (!is_synchronizing(a)) return std::nullopt;
  const std::uint64_t start = detail::full_set(a.n());
  if (std::has_single_bit(start)) return 0;

  detail::SubsetSet visited;
  visited.insert(start);
  std::vector<std::uint64_t> frontier{start}, next;
  for (std::size_t depth = 1;; ++depth) {
    next.clear();
    for (std::uint64_t s : frontier) {
      for (const auto& f : a.letters()) {
        const std::uint64_t t = detail::apply_letter(f, s);
        if (std::has_single_bit(t)) return depth;
        if (visited.insert(t)) {
          if (visited.size() > subset_cap) {
            throw CapExhausted("subset cap exhausted in reset threshold search");
          }
          next.push_back(t);
        }
      }
    }
    // Unreachable for synchronizing automata; kept as a guard.
    if (next.empty()) return std::nullopt;
    frontier.swap(next);
  }
}

/// A shortest synchronizing word as letter indices, reconstructed from
/// parent links. Costs more memory than reset_threshold_exact.
inline std::optional<std::vector<std::size_t>> shortest_reset_word(
    const Automaton& a, std::size_t subset_cap = kDefaultSubsetCap) {
  detail::require_subset_encodable(a);
  if (!is_synchronizing(a)) return std::nullopt;
  const std::uint64_t start = detail::full_set(a.n());
  if (std::has_single_bit(start)) return std::vector<std::size_t>{};

  struct Link {
    std::uint64_t parent;
    std::size_t letter;
  };
  std::unordered_map<std::uint64_t, Link> parent;
  parent.emplace(start, Link{0, 0});
  std::vector<std::uint64_t> frontier{start}, next;
  while (!frontier.empty()) {
    next.clear();
    for (std::uint64_t s : frontier) {
      for (std::size_t k = 0; k < a.size(); ++k) {
        const std::uint64_t t = detail::apply_letter(a[k], s);
        if (!parent.emplace(t, Link{s, k}).second) continue;
        if (std::has_single_bit(t)) {
          std::vector<std::size_t> word;
          for (std::uint64_t x = t; x != start; x = parent.at(x).parent) {
            word.push_back(parent.at(x).letter);
          }
          return std::vector<std::size_t>(word.rbegin(), word.rend());
        }
        if (parent.size() > subset_cap) {
          throw CapExhausted("subset cap exhausted in reset word search");
        }
        next.push_back(t);
      }
    }
    frontier.swap(next);
  }
  return std::nullopt;
}

/// Applies a word to every state; the word synchronizes iff the image of the
/// full set is a singleton.
inline bool is_reset_word(const Automaton& a,
                          const std::vector<std::size_t>& word) {
  std::vector<bool> cur(a.n(), true);
  for (std::size_t k : word) {
    std::vector<bool> nxt(a.n(), false);
    for (std::size_t s = 0; s < a.n(); ++s) {
      if (cur[s]) nxt[a[k][s]] = true;
    }
    cur.swap(nxt);
  }
  std::size_t alive = 0;
  for (bool b : cur) alive += b ? 1 : 0;
  return alive == 1;
}

}  // namespace synchro
