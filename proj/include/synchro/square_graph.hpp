#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <utility>
#include <vector>

#include "synchro/automaton.hpp"
#include "synchro/matrix_set.hpp"

namespace synchro {

/// Index of the unordered pair {i, j} among the n(n+1)/2 pairs with i <= j,
/// row-major over the upper triangle.
inline std::size_t pair_index(std::size_t n, std::size_t i, std::size_t j) {
  if (i > j) std::swap(i, j);
  return i * n - i * (i - 1) / 2 + (j - i);
}

/// Square graph of an automaton: one vertex per unordered pair {i, j}
/// (singletons are i == j) and, for every letter, the edge
/// {i, j} -> {f(i), f(j)}.
class SquareGraph {
 public:
  using Vertex = std::uint32_t;

  explicit SquareGraph(const Automaton& a)
      : n_(a.n()), m_(a.size()), vertices_(a.n() * (a.n() + 1) / 2) {
    first_.resize(vertices_);
    second_.resize(vertices_);
    succ_.resize(vertices_ * m_);
    for (std::size_t i = 0; i < n_; ++i) {
      for (std::size_t j = i; j < n_; ++j) {
        const std::size_t v = pair_index(n_, i, j);
        first_[v] = static_cast<State>(i);
        second_[v] = static_cast<State>(j);
        for (std::size_t k = 0; k < m_; ++k) {
          succ_[v * m_ + k] =
              static_cast<Vertex>(pair_index(n_, a[k][i], a[k][j]));
        }
      }
    }
  }

  std::size_t n() const { return n_; }
  std::size_t letters() const { return m_; }
  std::size_t vertex_count() const { return vertices_; }
  Vertex successor(std::size_t v, std::size_t letter) const {
    return succ_[v * m_ + letter];
  }
  bool is_singleton(std::size_t v) const { return first_[v] == second_[v]; }
  std::pair<State, State> pair_of(std::size_t v) const {
    return {first_[v], second_[v]};
  }
  Vertex vertex(std::size_t i, std::size_t j) const {
    return static_cast<Vertex>(pair_index(n_, i, j));
  }

  /// Shortest distance from every vertex to the set of singletons;
  /// kUnreachable where no path exists.
  std::vector<std::size_t> distance_to_singletons() const {
    // Reverse adjacency in CSR form.
    std::vector<std::size_t> start(vertices_ + 1, 0);
    for (Vertex t : succ_) ++start[t + 1];
    for (std::size_t v = 0; v < vertices_; ++v) start[v + 1] += start[v];
    std::vector<Vertex> pred(succ_.size());
    std::vector<std::size_t> fill(start.begin(), start.end() - 1);
    for (std::size_t v = 0; v < vertices_; ++v) {
      for (std::size_t k = 0; k < m_; ++k) {
        pred[fill[succ_[v * m_ + k]]++] = static_cast<Vertex>(v);
      }
    }

    std::vector<std::size_t> dist(vertices_, kUnreachable);
    std::vector<Vertex> queue;
    queue.reserve(vertices_);
    for (std::size_t i = 0; i < n_; ++i) {
      const Vertex v = vertex(i, i);
      dist[v] = 0;
      queue.push_back(v);
    }
    for (std::size_t head = 0; head < queue.size(); ++head) {
      const Vertex v = queue[head];
      for (std::size_t e = start[v]; e < start[v + 1]; ++e) {
        const Vertex u = pred[e];
        if (dist[u] == kUnreachable) {
          dist[u] = dist[v] + 1;
          queue.push_back(u);
        }
      }
    }
    return dist;
  }

  /// Forward BFS distances from `source`.
  std::vector<std::size_t> distances_from(std::size_t source) const {
    std::vector<std::size_t> dist(vertices_, kUnreachable);
    std::vector<Vertex> queue{static_cast<Vertex>(source)};
    dist[source] = 0;
    for (std::size_t head = 0; head < queue.size(); ++head) {
      const Vertex v = queue[head];
      for (std::size_t k = 0; k < m_; ++k) {
        const Vertex u = succ_[v * m_ + k];
        if (dist[u] == kUnreachable) {
          dist[u] = dist[v] + 1;
          queue.push_back(u);
        }
      }
    }
    return dist;
  }

  static constexpr std::size_t kUnreachable =
      std::numeric_limits<std::size_t>::max();

 private:
  std::size_t n_;
  std::size_t m_;
  std::size_t vertices_;
  std::vector<State> first_;
  std::vector<State> second_;
  std::vector<Vertex> succ_;
};

inline SquareGraph square_graph(const Automaton& a) { return SquareGraph(a); }

/// Two readings of "diameter" of the square graph.
struct DiameterReport {
  /// Largest distance from a non-singleton vertex to the nearest singleton;
  /// absent when some pair cannot be merged. This is the quantity that
  /// lower-bounds the reset threshold.
  std::optional<std::size_t> sync_eccentricity;
  /// Largest shortest-path length over ordered pairs (u, v) with v reachable
  /// from u.
  std::size_t pair_diameter = 0;
};

/// A path from every pair to a singleton exists.
inline bool is_synchronizing(const Automaton& a) {
  const auto dist = SquareGraph(a).distance_to_singletons();
  return std::none_of(dist.begin(), dist.end(), [](std::size_t d) {
    return d == SquareGraph::kUnreachable;
  });
}

inline std::optional<std::size_t> sync_eccentricity(const SquareGraph& g) {
  std::size_t worst = 0;
  const auto dist = g.distance_to_singletons();
  for (std::size_t d : dist) {
    if (d == SquareGraph::kUnreachable) return std::nullopt;
    worst = std::max(worst, d);
  }
  return worst;
}

inline std::optional<std::size_t> sync_eccentricity(const Automaton& a) {
  return sync_eccentricity(SquareGraph(a));
}

inline DiameterReport diameters(const Automaton& a) {
  const SquareGraph g(a);
  DiameterReport r;
  r.sync_eccentricity = sync_eccentricity(g);
  for (std::size_t v = 0; v < g.vertex_count(); ++v) {
    for (std::size_t d : g.distances_from(v)) {
      if (d != SquareGraph::kUnreachable) r.pair_diameter = std::max(r.pair_diameter, d);
    }
  }
  return r;
}

/// Synchronizing, and every sub-automaton missing one letter is not.
inline bool is_minimally_synchronizing(const Automaton& a) {
  if (!is_synchronizing(a)) {
    throw InvalidInput("automaton is not synchronizing");
  }
  if (a.size() == 1) return true;
  for (std::size_t k = 0; k < a.size(); ++k) {
    if (is_synchronizing(a.without(k))) return false;
  }
  return true;
}

/// Synchronization of the associated automaton of an NZ set, evaluated on
/// the matrices directly: from {i, j} a matrix M reaches every {i', j'} with
/// M(i, i') = M(j, j') = 1, which is exactly the square graph of the
/// associated automaton without enumerating its letters.
inline bool associated_automaton_synchronizes(const MatrixSet& s) {
  const std::size_t n = s.n();
  std::vector<std::vector<std::vector<std::size_t>>> cols;  // [matrix][col] -> rows
  for (const auto& m : s) {
    const BinaryMatrix mt = m.transposed();
    std::vector<std::vector<std::size_t>> c(n);
    for (std::size_t j = 0; j < n; ++j) c[j] = mt.row_support(j);
    cols.push_back(std::move(c));
  }
  const std::size_t vertices = n * (n + 1) / 2;
  std::vector<bool> reached(vertices, false);
  std::vector<std::pair<State, State>> queue;
  queue.reserve(vertices);
  for (std::size_t i = 0; i < n; ++i) {
    reached[pair_index(n, i, i)] = true;
    queue.emplace_back(static_cast<State>(i), static_cast<State>(i));
  }
  for (std::size_t head = 0; head < queue.size(); ++head) {
    const auto [a, b] = queue[head];
    for (const auto& c : cols) {
      for (std::size_t i : c[a]) {
        for (std::size_t j : c[b]) {
          if (i == j) continue;
          const std::size_t v = pair_index(n, i, j);
          if (!reached[v]) {
            reached[v] = true;
            queue.emplace_back(static_cast<State>(std::min(i, j)),
                               static_cast<State>(std::max(i, j)));
          }
        }
      }
    }
  }
  return queue.size() == vertices;
}

}  // namespace synchro
