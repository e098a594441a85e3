#pragma once

#include <bit>
#include <cstddef>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "synchro/bit_matrix.hpp"
#include "synchro/matrix_set.hpp"

namespace synchro {

inline constexpr std::size_t kDefaultFillCap = std::size_t{1} << 16;

namespace detail {

using Word = BinaryMatrix::Word;
using Support = std::vector<Word>;

inline std::size_t support_size(const Support& s) {
  std::size_t c = 0;
  for (Word w : s) c += static_cast<std::size_t>(std::popcount(w));
  return c;
}

/// Union of the rows of `m` indexed by the members of `s`.
inline Support row_union(const BinaryMatrix& m, const Support& s) {
  Support out(m.words_per_row(), 0);
  for (std::size_t w = 0; w < s.size(); ++w) {
    for (Word bits = s[w]; bits != 0; bits &= bits - 1) {
      const std::size_t i = w * BinaryMatrix::kWordBits +
                            static_cast<std::size_t>(std::countr_zero(bits));
      const auto row = m.row(i);
      for (std::size_t k = 0; k < out.size(); ++k) out[k] |= row[k];
    }
  }
  return out;
}

inline std::string support_key(const Support& s) {
  return std::string(reinterpret_cast<const char*>(s.data()),
                     s.size() * sizeof(Word));
}

/// Length of a word w with {start} . w = [n], built greedily: from the
/// current set, breadth-first search for the nearest strictly larger set
/// and jump there. Absent if a search stalls or visits more than `cap` sets.
inline std::optional<std::size_t> fill_from(const std::vector<BinaryMatrix>& ms,
                                            std::size_t start, std::size_t cap) {
  const std::size_t n = ms.front().n();
  Support current(ms.front().words_per_row(), 0);
  current[start / BinaryMatrix::kWordBits] |= Word{1} << (start % BinaryMatrix::kWordBits);
  std::size_t length = 0;
  while (support_size(current) < n) {
    const std::size_t size = support_size(current);
    std::unordered_map<std::string, std::size_t> depth{{support_key(current), 0}};
    std::vector<Support> frontier{current};
    std::optional<Support> better;
    std::size_t steps = 0;
    while (!frontier.empty() && !better) {
      ++steps;
      std::vector<Support> next;
      for (const auto& s : frontier) {
        for (const auto& m : ms) {
          Support t = row_union(m, s);
          if (support_size(t) > size) {
            better = std::move(t);
            break;
          }
          if (depth.emplace(support_key(t), steps).second) {
            if (depth.size() > cap) return std::nullopt;
            next.push_back(std::move(t));
          }
        }
        if (better) break;
      }
      frontier = std::move(next);
    }
    if (!better) return std::nullopt;
    length += steps;
    current = std::move(*better);
  }
  return length;
}

}  // namespace detail

/// Upper bound on the exponent: the length of a positive product W V found
/// by column filling, where W has an all-ones column c and V an all-ones
/// row c. Absent when the greedy search gives up, which does not imply the
/// set is not primitive.
inline std::optional<std::size_t> greedy_positive_product_length(
    const MatrixSet& s, std::size_t cap = kDefaultFillCap) {
  std::vector<BinaryMatrix> forward(s.begin(), s.end());
  std::vector<BinaryMatrix> backward;
  for (const auto& m : s) backward.push_back(m.transposed());
  for (std::size_t c = 0; c < s.n(); ++c) {
    const auto w = detail::fill_from(backward, c, cap);
    if (!w) continue;
    const auto v = detail::fill_from(forward, c, cap);
    if (!v) continue;
    return *w + *v;
  }
  return std::nullopt;
}

}  // namespace synchro
