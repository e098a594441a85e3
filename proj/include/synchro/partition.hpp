#pragma once

#include <algorithm>
#include <cstddef>
#include <vector>

#include "synchro/config.hpp"
#include "synchro/permutation.hpp"

namespace synchro {

/// Partition of {0..n-1} into k >= 2 nonempty blocks labelled 0..k-1.
class Partition {
 public:
  explicit Partition(std::vector<State> block_of)
      : block_of_(std::move(block_of)) {
    check_dimension(block_of_.size());
    std::size_t k = 0;
    for (State b : block_of_) k = std::max<std::size_t>(k, b + 1);
    sizes_.assign(k, 0);
    for (State b : block_of_) ++sizes_[b];
    if (k < 2) throw InvalidInput("partition needs at least two blocks");
    for (std::size_t s : sizes_) {
      if (s == 0) throw InvalidInput("partition has an empty block");
    }
  }

  std::size_t n() const { return block_of_.size(); }
  std::size_t blocks() const { return sizes_.size(); }
  State block_of(std::size_t i) const { return block_of_[i]; }
  const std::vector<State>& labels() const { return block_of_; }
  std::size_t block_size(std::size_t l) const { return sizes_[l]; }

  std::vector<std::size_t> members(std::size_t l) const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < n(); ++i) {
      if (block_of_[i] == l) out.push_back(i);
    }
    return out;
  }

  bool has_equal_blocks() const {
    return std::all_of(sizes_.begin(), sizes_.end(),
                       [&](std::size_t s) { return s == sizes_.front(); });
  }

  /// Same partition with blocks renumbered by first appearance, so two
  /// partitions are equal as set partitions iff their canonical forms match.
  Partition canonical() const {
    std::vector<State> relabel(blocks(), static_cast<State>(-1));
    std::vector<State> out(n());
    State next = 0;
    for (std::size_t i = 0; i < n(); ++i) {
      State& r = relabel[block_of_[i]];
      if (r == static_cast<State>(-1)) r = next++;
      out[i] = r;
    }
    return Partition(std::move(out));
  }

  friend bool operator==(const Partition&, const Partition&) = default;

 private:
  std::vector<State> block_of_;
  std::vector<std::size_t> sizes_;
};

/// A q-partition: q >= 2 blocks of size n/q each.
class EqualPartition : public Partition {
 public:
  explicit EqualPartition(std::vector<State> block_of)
      : Partition(std::move(block_of)) {
    if (!has_equal_blocks()) throw InvalidInput("blocks differ in size");
  }

  std::size_t q() const { return blocks(); }
  std::size_t block_size() const { return n() / q(); }
};

}  // namespace synchro
