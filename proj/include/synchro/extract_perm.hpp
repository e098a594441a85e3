#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "synchro/bit_matrix.hpp"
#include "synchro/permutation.hpp"
#include "synchro/random.hpp"

namespace synchro {

/// How ExtractPerm picks a 1-entry in the row or column of minimum count.
enum class ExtractMethod {
  Random,         // uniformly among the candidates ("method 2")
  Deterministic,  // first candidate in lexicographic order ("method 3")
};

namespace detail {

/// Perfect matching between the live rows and live columns of a matrix,
/// kept up to date while extract_perm retires lines.
class LiveMatching {
 public:
  static constexpr std::size_t kNone = static_cast<std::size_t>(-1);

  explicit LiveMatching(const BinaryMatrix& m)
      : n_(m.n()), adj_(m.n()), row_live_(m.n(), true), col_live_(m.n(), true),
        row_to_col_(m.n(), kNone), col_to_row_(m.n(), kNone), seen_(m.n(), 0) {
    for (std::size_t i = 0; i < n_; ++i) adj_[i] = m.row_support(i);
  }

  /// Kuhn's algorithm on the full matrix.
  bool complete() {
    for (std::size_t r = 0; r < n_; ++r) {
      ++stamp_;
      if (!augment(r)) return false;
    }
    return true;
  }

  /// Retires row r and column c if (r, c) lies in some perfect matching of
  /// the live submatrix; otherwise leaves everything unchanged.
  bool take(std::size_t r, std::size_t c) {
    const std::size_t r2 = col_to_row_[c];
    const std::size_t c2 = row_to_col_[r];
    row_live_[r] = false;
    col_live_[c] = false;
    if (r2 == r) return true;
    // r2 lost its partner and c2 is free: rematch r2 through c2.
    row_to_col_[r2] = kNone;
    col_to_row_[c2] = kNone;
    ++stamp_;
    if (augment(r2)) {
      row_to_col_[r] = c;
      col_to_row_[c] = r;
      return true;
    }
    row_live_[r] = true;
    col_live_[c] = true;
    row_to_col_[r2] = c;
    col_to_row_[c2] = r;
    return false;
  }

 private:
  bool augment(std::size_t x) {
    for (std::size_t y : adj_[x]) {
      if (!col_live_[y] || seen_[y] == stamp_) continue;
      seen_[y] = stamp_;
      if (col_to_row_[y] == kNone || augment(col_to_row_[y])) {
        row_to_col_[x] = y;
        col_to_row_[y] = x;
        return true;
      }
    }
    return false;
  }

  std::size_t n_;
  std::vector<std::vector<std::size_t>> adj_;
  std::vector<bool> row_live_, col_live_;
  std::vector<std::size_t> row_to_col_, col_to_row_;
  std::vector<std::size_t> seen_;
  std::size_t stamp_ = 0;
};

}  // namespace detail

/// Greedy minimum-count extraction of a permutation dominated by m.
///
/// Each step looks at the live rows and live columns of m and takes the one
/// with the fewest 1s among live positions; rows win ties against columns and
/// lower indices win ties among rows (or among columns). A 1-entry of that
/// line is chosen, its row and column leave the live sets, and the step
/// repeats. The result is in the original coordinates of m.
///
/// Plain greedy choice can strand itself on an entry that lies in no
/// dominated permutation. Such entries are skipped: Deterministic takes the
/// first entry that still extends, Random draws uniformly among the entries
/// not yet rejected. Absent exactly when m dominates no permutation.
///
/// `rng` is only consulted for ExtractMethod::Random.
inline std::optional<Permutation> extract_perm(const BinaryMatrix& m,
                                               ExtractMethod method,
                                               Rng* rng = nullptr) {
  const std::size_t n = m.n();
  detail::LiveMatching matching(m);
  if (!matching.complete()) return std::nullopt;

  const BinaryMatrix mt = m.transposed();
  std::vector<bool> row_live(n, true), col_live(n, true);
  std::vector<std::size_t> row_cnt(n), col_cnt(n);
  for (std::size_t i = 0; i < n; ++i) {
    row_cnt[i] = m.row_count(i);
    col_cnt[i] = mt.row_count(i);
  }

  std::vector<State> image(n);
  std::vector<std::size_t> candidates;
  candidates.reserve(n);

  auto pick = [&](std::size_t count) -> std::size_t {
    if (method == ExtractMethod::Deterministic || count == 1) return 0;
    if (rng == nullptr) throw InvalidInput("random extraction needs an rng");
    return static_cast<std::size_t>(rng->below(count));
  };

  // Remove row r and column c; keep the live counts exact.
  auto retire = [&](std::size_t r, std::size_t c) {
    row_live[r] = false;
    col_live[c] = false;
    for (std::size_t j : m.row_support(r)) {
      if (col_live[j]) --col_cnt[j];
    }
    for (std::size_t i : mt.row_support(c)) {
      if (row_live[i]) --row_cnt[i];
    }
  };

  for (std::size_t step = 0; step < n; ++step) {
    std::size_t best_row = n, best_col = n;
    for (std::size_t i = 0; i < n; ++i) {
      if (row_live[i] && (best_row == n || row_cnt[i] < row_cnt[best_row])) {
        best_row = i;
      }
    }
    for (std::size_t j = 0; j < n; ++j) {
      if (col_live[j] && (best_col == n || col_cnt[j] < col_cnt[best_col])) {
        best_col = j;
      }
    }
    const bool use_column = col_cnt[best_col] < row_cnt[best_row];

    candidates.clear();
    if (!use_column) {
      for (std::size_t j : m.row_support(best_row)) {
        if (col_live[j]) candidates.push_back(j);
      }
    } else {
      for (std::size_t i : mt.row_support(best_col)) {
        if (row_live[i]) candidates.push_back(i);
      }
    }
    // The live matching covers this line, so some candidate extends.
    while (true) {
      const std::size_t k = pick(candidates.size());
      const std::size_t r = use_column ? candidates[k] : best_row;
      const std::size_t c = use_column ? best_col : candidates[k];
      if (matching.take(r, c)) {
        image[r] = static_cast<State>(c);
        retire(r, c);
        break;
      }
      candidates.erase(candidates.begin() + static_cast<std::ptrdiff_t>(k));
    }
  }
  return Permutation(std::move(image));
}

/// Perfect matching in the bipartite row/column graph of m, by augmenting
/// paths. Independent of extract_perm; used to cross-check it.
inline bool matching_oracle(const BinaryMatrix& m) {
  const std::size_t n = m.n();
  std::vector<std::vector<std::size_t>> adj(n);
  for (std::size_t i = 0; i < n; ++i) adj[i] = m.row_support(i);
  constexpr std::size_t kFree = static_cast<std::size_t>(-1);
  std::vector<std::size_t> match_col(n, kFree);
  std::vector<std::size_t> seen(n, kFree);

  // Iterative DFS so large n cannot overflow the stack.
  auto augment = [&](std::size_t root) {
    struct Frame {
      std::size_t row;
      std::size_t next;
    };
    std::vector<Frame> stack{{root, 0}};
    std::vector<std::size_t> via;  // column chosen at each frame
    while (!stack.empty()) {
      Frame& f = stack.back();
      if (f.next == adj[f.row].size()) {
        stack.pop_back();
        if (!via.empty()) via.pop_back();
        continue;
      }
      const std::size_t c = adj[f.row][f.next++];
      if (seen[c] == root) continue;
      seen[c] = root;
      if (match_col[c] == kFree) {
        via.push_back(c);
        // Flip the alternating path.
        for (std::size_t k = stack.size(); k-- > 0;) {
          match_col[via[k]] = stack[k].row;
        }
        return true;
      }
      via.push_back(c);
      stack.push_back({match_col[c], 0});
    }
    return false;
  };

  for (std::size_t r = 0; r < n; ++r) {
    if (!augment(r)) return false;
  }
  return true;
}

}  // namespace synchro
