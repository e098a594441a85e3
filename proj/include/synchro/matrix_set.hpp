#pragma once

#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

#include "synchro/bit_matrix.hpp"
#include "synchro/permutation.hpp"

namespace synchro {

/// One enforced block-permutation structure: every matrix other than
/// `excluded` maps block l of `block_of` into block sigmas[k][l].
struct RecordedStructure {
  std::size_t excluded = 0;
  std::size_t q = 0;
  std::vector<State> block_of;
  std::vector<std::optional<std::vector<State>>> sigmas;  // nullopt at `excluded`

  friend bool operator==(const RecordedStructure&,
                         const RecordedStructure&) = default;
};

struct Perturbation {
  std::size_t matrix = 0;
  std::size_t row = 0;
  std::size_t col = 0;

  friend bool operator==(const Perturbation&, const Perturbation&) = default;
};

/// Generator record attached to sets built by the minimally-primitive
/// construction.
struct GeneratorMeta {
  std::vector<RecordedStructure> structures;
  std::optional<Perturbation> perturbation;

  friend bool operator==(const GeneratorMeta&, const GeneratorMeta&) = default;
};

/// Nonempty ordered list of same-size binary matrices.
class MatrixSet {
 public:
  explicit MatrixSet(std::vector<BinaryMatrix> matrices,
                     std::optional<GeneratorMeta> meta = std::nullopt)
      : matrices_(std::move(matrices)), meta_(std::move(meta)) {
    if (matrices_.empty()) throw InvalidInput("matrix set is empty");
    for (const auto& m : matrices_) require_same_dimension(m, matrices_.front());
  }

  std::size_t n() const { return matrices_.front().n(); }
  std::size_t size() const { return matrices_.size(); }
  const BinaryMatrix& operator[](std::size_t k) const { return matrices_[k]; }
  const std::vector<BinaryMatrix>& matrices() const { return matrices_; }
  const std::optional<GeneratorMeta>& meta() const { return meta_; }

  auto begin() const { return matrices_.begin(); }
  auto end() const { return matrices_.end(); }

  MatrixSet transposed() const {
    std::vector<BinaryMatrix> t;
    t.reserve(size());
    for (const auto& m : matrices_) t.push_back(m.transposed());
    return MatrixSet(std::move(t));
  }

  /// The set with matrix k removed (metadata dropped).
  MatrixSet without(std::size_t k) const {
    std::vector<BinaryMatrix> rest;
    for (std::size_t i = 0; i < size(); ++i) {
      if (i != k) rest.push_back(matrices_[i]);
    }
    return MatrixSet(std::move(rest));
  }

  BinaryMatrix sum() const {
    BinaryMatrix s = matrices_.front();
    for (std::size_t i = 1; i < size(); ++i) s = bool_sum(s, matrices_[i]);
    return s;
  }

  bool all_nz() const {
    for (const auto& m : matrices_) {
      if (!is_nz(m)) return false;
    }
    return true;
  }

  friend bool operator==(const MatrixSet&, const MatrixSet&) = default;

 private:
  std::vector<BinaryMatrix> matrices_;
  std::optional<GeneratorMeta> meta_;
};

}  // namespace synchro
