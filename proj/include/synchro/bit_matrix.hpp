#pragma once

#include <algorithm>
#include <bit>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

#include "synchro/config.hpp"

namespace synchro {

/// Square 0/1 matrix with bit-packed rows. Row i bit j is entry (i, j).
/// Bits past column n in the last word of a row are always zero.
class BinaryMatrix {
 public:
  using Word = std::uint64_t;
  static constexpr std::size_t kWordBits = 64;

  explicit BinaryMatrix(std::size_t n)
      : n_(n), wpr_((n + kWordBits - 1) / kWordBits) {
    check_dimension(n);
    bits_.assign(n_ * wpr_, Word{0});
  }

  static BinaryMatrix identity(std::size_t n) {
    BinaryMatrix m(n);
    for (std::size_t i = 0; i < n; ++i) m.set(i, i);
    return m;
  }

  static BinaryMatrix ones(std::size_t n) {
    BinaryMatrix m(n);
    for (std::size_t i = 0; i < n; ++i) m.fill_row(i);
    return m;
  }

  /// Dense 0/1 literal, e.g. {{0,1},{1,0}}.
  static BinaryMatrix from_dense(
      std::initializer_list<std::initializer_list<int>> rows) {
    return from_dense(std::vector<std::vector<int>>(rows.begin(), rows.end()));
  }

  static BinaryMatrix from_dense(const std::vector<std::vector<int>>& rows) {
    BinaryMatrix m(rows.size());
    std::size_t i = 0;
    for (const auto& row : rows) {
      if (row.size() != m.n_) {
        throw DimensionError("dense literal is not square");
      }
      std::size_t j = 0;
      for (int v : row) {
        if (v != 0) m.set(i, j);
        ++j;
      }
      ++i;
    }
    return m;
  }

  /// Row i lists the columns holding a 1.
  static BinaryMatrix from_support(
      std::size_t n, const std::vector<std::vector<std::size_t>>& rows) {
    BinaryMatrix m(n);
    if (rows.size() != n) throw DimensionError("support has wrong row count");
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j : rows[i]) {
        if (j >= n) throw DimensionError("column index out of range");
        m.set(i, j);
      }
    }
    return m;
  }

  std::size_t n() const { return n_; }
  std::size_t words_per_row() const { return wpr_; }

  bool get(std::size_t i, std::size_t j) const {
    return (bits_[i * wpr_ + j / kWordBits] >> (j % kWordBits)) & Word{1};
  }

  void set(std::size_t i, std::size_t j, bool value = true) {
    Word& w = bits_[i * wpr_ + j / kWordBits];
    const Word mask = Word{1} << (j % kWordBits);
    w = value ? (w | mask) : (w & ~mask);
  }

  std::span<const Word> row(std::size_t i) const {
    return {bits_.data() + i * wpr_, wpr_};
  }
  std::span<Word> row(std::size_t i) { return {bits_.data() + i * wpr_, wpr_}; }

  std::size_t row_count(std::size_t i) const {
    std::size_t c = 0;
    for (Word w : row(i)) c += static_cast<std::size_t>(std::popcount(w));
    return c;
  }

  std::size_t count() const {
    std::size_t c = 0;
    for (Word w : bits_) c += static_cast<std::size_t>(std::popcount(w));
    return c;
  }

  /// Columns holding a 1 in row i, ascending.
  std::vector<std::size_t> row_support(std::size_t i) const {
    std::vector<std::size_t> out;
    auto r = row(i);
    for (std::size_t w = 0; w < wpr_; ++w) {
      for (Word bits = r[w]; bits != 0; bits &= bits - 1) {
        out.push_back(w * kWordBits +
                      static_cast<std::size_t>(std::countr_zero(bits)));
      }
    }
    return out;
  }

  BinaryMatrix transposed() const {
    BinaryMatrix t(n_);
    for (std::size_t i = 0; i < n_; ++i) {
      for (std::size_t j : row_support(i)) t.set(j, i);
    }
    return t;
  }

  bool is_all_ones() const {
    for (std::size_t i = 0; i < n_; ++i) {
      if (row_count(i) != n_) return false;
    }
    return true;
  }

  /// Exactly one 1 in every row and column.
  bool is_permutation() const {
    std::vector<bool> hit(n_, false);
    for (std::size_t i = 0; i < n_; ++i) {
      if (row_count(i) != 1) return false;
      const std::size_t j = row_support(i).front();
      if (hit[j]) return false;
      hit[j] = true;
    }
    return true;
  }

  /// Compact byte image used as a hash key in semigroup searches.
  std::string key() const {
    return {reinterpret_cast<const char*>(bits_.data()),
            bits_.size() * sizeof(Word)};
  }

  std::string to_string() const {
    std::string s;
    for (std::size_t i = 0; i < n_; ++i) {
      for (std::size_t j = 0; j < n_; ++j) s.push_back(get(i, j) ? '1' : '0');
      s.push_back('\n');
    }
    return s;
  }

  friend bool operator==(const BinaryMatrix&, const BinaryMatrix&) = default;

 private:
  void fill_row(std::size_t i) {
    auto r = row(i);
    std::fill(r.begin(), r.end(), ~Word{0});
    if (const std::size_t tail = n_ % kWordBits; tail != 0) {
      r.back() = (Word{1} << tail) - 1;
    }
  }

  std::size_t n_;
  std::size_t wpr_;
  std::vector<Word> bits_;
};

inline void require_same_dimension(std::size_t a, std::size_t b) {
  if (a != b) {
    throw DimensionError("dimension mismatch: " + std::to_string(a) + " vs " +
                         std::to_string(b));
  }
}

inline void require_same_dimension(const BinaryMatrix& a,
                                   const BinaryMatrix& b) {
  require_same_dimension(a.n(), b.n());
}

/// Boolean product: row i of the result is the OR of the rows of b selected
/// by row i of a.
inline BinaryMatrix bool_product(const BinaryMatrix& a, const BinaryMatrix& b) {
  require_same_dimension(a, b);
  const std::size_t n = a.n();
  const std::size_t wpr = a.words_per_row();
  BinaryMatrix out(n);
  for (std::size_t i = 0; i < n; ++i) {
    auto dst = out.row(i);
    auto src = a.row(i);
    for (std::size_t w = 0; w < wpr; ++w) {
      for (BinaryMatrix::Word bits = src[w]; bits != 0; bits &= bits - 1) {
        const std::size_t k =
            w * BinaryMatrix::kWordBits +
            static_cast<std::size_t>(std::countr_zero(bits));
        auto bk = b.row(k);
        for (std::size_t x = 0; x < wpr; ++x) dst[x] |= bk[x];
      }
    }
  }
  return out;
}

/// Entrywise OR.
inline BinaryMatrix bool_sum(const BinaryMatrix& a, const BinaryMatrix& b) {
  require_same_dimension(a, b);
  BinaryMatrix out = a;
  for (std::size_t i = 0; i < a.n(); ++i) {
    auto dst = out.row(i);
    auto src = b.row(i);
    for (std::size_t w = 0; w < dst.size(); ++w) dst[w] |= src[w];
  }
  return out;
}

/// True iff a(i,j) >= b(i,j) everywhere.
inline bool dominates(const BinaryMatrix& a, const BinaryMatrix& b) {
  require_same_dimension(a, b);
  for (std::size_t i = 0; i < a.n(); ++i) {
    auto ra = a.row(i);
    auto rb = b.row(i);
    for (std::size_t w = 0; w < ra.size(); ++w) {
      if ((rb[w] & ~ra[w]) != 0) return false;
    }
  }
  return true;
}

/// No zero row and no zero column.
inline bool is_nz(const BinaryMatrix& m) {
  const std::size_t wpr = m.words_per_row();
  std::vector<BinaryMatrix::Word> cols(wpr, 0);
  for (std::size_t i = 0; i < m.n(); ++i) {
    auto r = m.row(i);
    bool any = false;
    for (std::size_t w = 0; w < wpr; ++w) {
      any = any || r[w] != 0;
      cols[w] |= r[w];
    }
    if (!any) return false;
  }
  std::size_t c = 0;
  for (auto w : cols) c += static_cast<std::size_t>(std::popcount(w));
  return c == m.n();
}

}  // namespace synchro
