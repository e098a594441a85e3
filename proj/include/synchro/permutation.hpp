#pragma once

#include <cstddef>
#include <cstdint>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "synchro/bit_matrix.hpp"

namespace synchro {

using State = std::uint32_t;

/// Bijection on {0, ..., n-1}; image[i] is the image of i.
class Permutation {
 public:
  explicit Permutation(std::vector<State> image) : image_(std::move(image)) {
    check_dimension(image_.size());
    std::vector<bool> hit(image_.size(), false);
    for (State v : image_) {
      if (v >= image_.size() || hit[v]) {
        throw InvalidInput("image is not a bijection");
      }
      hit[v] = true;
    }
  }

  static Permutation identity(std::size_t n) {
    std::vector<State> img(n);
    std::iota(img.begin(), img.end(), State{0});
    return Permutation(std::move(img));
  }

  /// i -> i+1 mod n.
  static Permutation cycle(std::size_t n) {
    std::vector<State> img(n);
    for (std::size_t i = 0; i < n; ++i) img[i] = static_cast<State>((i + 1) % n);
    return Permutation(std::move(img));
  }

  /// Reads the unique 1 of each row; absent unless m is a permutation matrix.
  static std::optional<Permutation> from_matrix(const BinaryMatrix& m) {
    if (!m.is_permutation()) return std::nullopt;
    std::vector<State> img(m.n());
    for (std::size_t i = 0; i < m.n(); ++i) {
      img[i] = static_cast<State>(m.row_support(i).front());
    }
    return Permutation(std::move(img));
  }

  std::size_t n() const { return image_.size(); }
  State operator[](std::size_t i) const { return image_[i]; }
  const std::vector<State>& image() const { return image_; }

  Permutation inverse() const {
    std::vector<State> inv(n());
    for (std::size_t i = 0; i < n(); ++i) inv[image_[i]] = static_cast<State>(i);
    return Permutation(std::move(inv));
  }

  /// (this then other): i -> other[this[i]].
  Permutation then(const Permutation& other) const {
    std::vector<State> img(n());
    for (std::size_t i = 0; i < n(); ++i) img[i] = other[image_[i]];
    return Permutation(std::move(img));
  }

  BinaryMatrix to_matrix() const {
    BinaryMatrix m(n());
    for (std::size_t i = 0; i < n(); ++i) m.set(i, image_[i]);
    return m;
  }

  friend bool operator==(const Permutation&, const Permutation&) = default;
  friend auto operator<=>(const Permutation&, const Permutation&) = default;

 private:
  std::vector<State> image_;
};

/// A permutation matrix with one extra 1 at (row, col), col != base[row].
class PerturbedPermutation {
 public:
  PerturbedPermutation(Permutation base, std::size_t row, std::size_t col)
      : base_(std::move(base)), row_(row), col_(col) {
    if (row_ >= base_.n() || col_ >= base_.n()) {
      throw DimensionError("perturbation index out of range");
    }
    if (base_[row_] == col_) {
      throw InvalidInput("perturbation must flip a 0-entry of the base");
    }
  }

  const Permutation& base() const { return base_; }
  std::size_t row() const { return row_; }
  std::size_t col() const { return col_; }

  BinaryMatrix to_matrix() const {
    BinaryMatrix m = base_.to_matrix();
    m.set(row_, col_);
    return m;
  }

 private:
  Permutation base_;
  std::size_t row_;
  std::size_t col_;
};

}  // namespace synchro
