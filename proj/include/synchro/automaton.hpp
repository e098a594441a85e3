#pragma once

#include <algorithm>
#include <cstddef>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "synchro/bit_matrix.hpp"
#include "synchro/matrix_set.hpp"
#include "synchro/permutation.hpp"

namespace synchro {

using Letter = std::vector<State>;

/// Complete deterministic automaton: every letter is a total map on
/// {0..n-1}, i.e. a binary row-stochastic matrix.
class Automaton {
 public:
  Automaton(std::size_t n, std::vector<Letter> letters)
      : n_(n), letters_(std::move(letters)) {
    check_dimension(n_);
    if (letters_.empty()) throw InvalidInput("automaton has no letters");
    for (const auto& f : letters_) {
      if (f.size() != n_) throw DimensionError("letter has wrong length");
      for (State s : f) {
        if (s >= n_) throw DimensionError("letter maps outside the state set");
      }
    }
  }

  std::size_t n() const { return n_; }
  std::size_t size() const { return letters_.size(); }
  const Letter& operator[](std::size_t k) const { return letters_[k]; }
  const std::vector<Letter>& letters() const { return letters_; }

  Automaton without(std::size_t k) const {
    std::vector<Letter> rest;
    for (std::size_t i = 0; i < size(); ++i) {
      if (i != k) rest.push_back(letters_[i]);
    }
    return Automaton(n_, std::move(rest));
  }

  /// Conjugate by a state relabelling: state s becomes perm[s].
  Automaton relabeled(const Permutation& perm) const {
    std::vector<Letter> out;
    for (const auto& f : letters_) {
      Letter g(n_);
      for (std::size_t s = 0; s < n_; ++s) g[perm[s]] = perm[f[s]];
      out.push_back(std::move(g));
    }
    return Automaton(n_, std::move(out));
  }

  static BinaryMatrix letter_matrix(const Letter& f) {
    BinaryMatrix m(f.size());
    for (std::size_t s = 0; s < f.size(); ++s) m.set(s, f[s]);
    return m;
  }

  MatrixSet as_matrix_set() const {
    std::vector<BinaryMatrix> ms;
    for (const auto& f : letters_) ms.push_back(letter_matrix(f));
    return MatrixSet(std::move(ms));
  }

  /// Same letters regardless of order.
  bool same_letters(const Automaton& other) const {
    if (n_ != other.n_) return false;
    std::set<Letter> a(letters_.begin(), letters_.end());
    std::set<Letter> b(other.letters_.begin(), other.letters_.end());
    return a == b;
  }

  friend bool operator==(const Automaton&, const Automaton&) = default;

 private:
  std::size_t n_;
  std::vector<Letter> letters_;
};

inline constexpr std::size_t kDefaultLetterCap = 10'000;

/// All binary row-stochastic matrices entrywise below some matrix of `s`,
/// deduplicated, in order of first appearance. Letters of one matrix are
/// enumerated odometer-style with the last row varying fastest.
///
/// For a perturbed-permutation set {P_1, ..., P_m + I_ij} this yields
/// P_1, ..., P_m and the merging letter P_m with row i redirected to j.
inline Automaton associated_automaton(const MatrixSet& s,
                                      std::size_t letter_cap = kDefaultLetterCap) {
  const std::size_t n = s.n();
  std::size_t total = 0;
  std::vector<std::vector<std::vector<std::size_t>>> choices;
  for (const auto& m : s) {
    std::vector<std::vector<std::size_t>> rows(n);
    std::size_t product = 1;
    for (std::size_t i = 0; i < n; ++i) {
      rows[i] = m.row_support(i);
      if (rows[i].empty()) {
        throw InvalidInput("zero row: no row-stochastic matrix is dominated");
      }
      product *= rows[i].size();
      if (product > letter_cap) {
        throw CapExhausted("associated automaton exceeds the letter cap");
      }
    }
    total += product;
    if (total > letter_cap) {
      throw CapExhausted("associated automaton exceeds the letter cap");
    }
    choices.push_back(std::move(rows));
  }

  std::vector<Letter> letters;
  std::set<Letter> seen;
  for (const auto& rows : choices) {
    std::vector<std::size_t> digit(n, 0);
    while (true) {
      Letter f(n);
      for (std::size_t i = 0; i < n; ++i) {
        f[i] = static_cast<State>(rows[i][digit[i]]);
      }
      if (seen.insert(f).second) letters.push_back(std::move(f));
      std::size_t i = n;
      while (i > 0 && ++digit[i - 1] == rows[i - 1].size()) {
        digit[i - 1] = 0;
        --i;
      }
      if (i == 0) break;
    }
  }
  return Automaton(n, std::move(letters));
}

/// The perturbed matrix of a perturbed-permutation set, decomposed.
struct PerturbedView {
  std::size_t matrix;         // index of the non-permutation matrix
  Permutation base;           // its dominated permutation P_m
  std::size_t row;            // i
  std::size_t col;            // j, the added entry
};

/// Recognises {P_1, ..., P_m + I_ij}: all permutation matrices except one
/// with exactly n+1 ones dominating a permutation. Absent otherwise.
inline std::optional<PerturbedView> as_perturbed_permutation_set(
    const MatrixSet& s) {
  const std::size_t n = s.n();
  std::optional<PerturbedView> found;
  for (std::size_t k = 0; k < s.size(); ++k) {
    const auto& m = s[k];
    if (m.is_permutation()) continue;
    if (found || m.count() != n + 1) return std::nullopt;
    const BinaryMatrix mt = m.transposed();
    std::size_t row = n;
    for (std::size_t i = 0; i < n; ++i) {
      const std::size_t c = m.row_count(i);
      if (c == 2 && row == n) {
        row = i;
      } else if (c != 1) {
        return std::nullopt;
      }
    }
    if (row == n) return std::nullopt;
    // The added entry sits in the doubled column; the other one is the base.
    std::optional<std::size_t> extra;
    for (std::size_t j : m.row_support(row)) {
      if (mt.row_count(j) == 2) extra = j;
    }
    if (!extra) return std::nullopt;
    BinaryMatrix base = m;
    base.set(row, *extra, false);
    auto p = Permutation::from_matrix(base);
    if (!p) return std::nullopt;
    found = PerturbedView{k, std::move(*p), row, *extra};
  }
  return found;
}

}  // namespace synchro
