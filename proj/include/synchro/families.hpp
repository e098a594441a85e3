#pragma once

#include <algorithm>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "synchro/automaton.hpp"
#include "synchro/matrix_set.hpp"
#include "synchro/partition.hpp"
#include "synchro/permutation.hpp"

namespace synchro {

/// Shape of the pair of symmetric permutations (Q1, Q2). The undirected
/// graph of Q1 + Q2 is a path for PathEven and PathOdd and a cycle for
/// CycleEven; its edges alternate between Q2 and Q1.
enum class PairShape {
  PathEven,   // n even; Q1 fixes the two ends, Q2 is a perfect matching
  CycleEven,  // n even; Q1 closes the path into a cycle
  PathOdd,    // n odd; Q1 fixes the first state, Q2 the last
};

/// Families of three-letter automata with quadratic square graph diameter.
enum class FamilyKind {
  E,       // n = 0 mod 4, n >= 8
  EPrime,  // n = 2 mod 4, n >= 10
  O,       // n = 1 mod 4, n >= 5
  OPrime,  // n = 3 mod 4, n >= 7
};

inline const char* to_string(FamilyKind k) {
  switch (k) {
    case FamilyKind::E:
      return "E";
    case FamilyKind::EPrime:
      return "Ep";
    case FamilyKind::O:
      return "O";
    case FamilyKind::OPrime:
      return "Op";
  }
  return "?";
}

/// (Q1, Q2) for the shape; both are involutions. Formulas are written with
/// 1-based labels and stored 0-based.
inline std::pair<Permutation, Permutation> build_involution_pair(
    PairShape shape, std::size_t n) {
  const bool even = n % 2 == 0;
  if ((shape == PairShape::PathOdd) == even) {
    throw InvalidInput("shape does not match the parity of n = " +
                       std::to_string(n));
  }
  if (n < 2) throw InvalidInput("n must be >= 2");
  std::vector<State> q1(n), q2(n);
  for (std::size_t i = 1; i <= n; ++i) {
    std::size_t a = 0, b = 0;
    if (shape == PairShape::PathOdd) {
      if (i == 1) {
        a = 1;
      } else {
        a = i % 2 == 0 ? i + 1 : i - 1;
      }
      if (i == n) {
        b = n;
      } else {
        b = i % 2 == 0 ? i - 1 : i + 1;
      }
    } else {
      if (i == 1) {
        a = shape == PairShape::PathEven ? 1 : n;
      } else if (i == n) {
        a = shape == PairShape::PathEven ? n : 1;
      } else {
        a = i % 2 == 0 ? i + 1 : i - 1;
      }
      b = i % 2 == 0 ? i - 1 : i + 1;
    }
    q1[i - 1] = static_cast<State>(a - 1);
    q2[i - 1] = static_cast<State>(b - 1);
  }
  return {Permutation(std::move(q1)), Permutation(std::move(q2))};
}

/// Letter sending `from` to `to` and fixing every other state.
inline Letter merging_letter(std::size_t n, std::size_t from, std::size_t to) {
  if (from >= n || to >= n || from == to) {
    throw InvalidInput("merging letter needs distinct states in range");
  }
  Letter f(n);
  for (std::size_t s = 0; s < n; ++s) f[s] = static_cast<State>(s);
  f[from] = static_cast<State>(to);
  return f;
}

/// Three-letter automaton {merge i -> j, Q1, Q2}; indices 0-based.
inline Automaton build_merge_automaton(PairShape shape, std::size_t n,
                                       std::size_t i, std::size_t j) {
  auto [q1, q2] = build_involution_pair(shape, n);
  return Automaton(n, {merging_letter(n, i, j), q1.image(), q2.image()});
}

/// The matrix set {I + E_ij, Q1, Q2} whose associated automaton is
/// build_merge_automaton(shape, n, i, j) plus the identity.
inline MatrixSet build_merge_set(PairShape shape, std::size_t n, std::size_t i,
                                 std::size_t j) {
  if (i >= n || j >= n || i == j) {
    throw InvalidInput("perturbation needs distinct states in range");
  }
  auto [q1, q2] = build_involution_pair(shape, n);
  BinaryMatrix perturbed = BinaryMatrix::identity(n);
  perturbed.set(i, j);
  return MatrixSet({std::move(perturbed), q1.to_matrix(), q2.to_matrix()});
}

inline void require_family_size(FamilyKind kind, std::size_t n) {
  struct Rule {
    std::size_t residue, minimum;
  };
  const Rule rule = [&] {
    switch (kind) {
      case FamilyKind::E:
        return Rule{0, 8};
      case FamilyKind::EPrime:
        return Rule{2, 10};
      case FamilyKind::O:
        return Rule{1, 5};
      case FamilyKind::OPrime:
        return Rule{3, 7};
    }
    return Rule{0, 0};
  }();
  if (n % 4 != rule.residue || n < rule.minimum) {
    throw InvalidInput(std::string("family ") + to_string(kind) +
                       " needs n = " + std::to_string(rule.residue) +
                       " mod 4 and n >= " + std::to_string(rule.minimum));
  }
}

/// 0-based (i, j) of the merging letter of a family member.
inline std::pair<std::size_t, std::size_t> family_merge(FamilyKind kind,
                                                        std::size_t n) {
  require_family_size(kind, n);
  switch (kind) {
    case FamilyKind::E:
      return {0, n - 3};
    case FamilyKind::EPrime:
      return {0, n - 5};
    case FamilyKind::O:
    case FamilyKind::OPrime:
      return {(n - 1) / 2 - 1, (n + 1) / 2 - 1};
  }
  return {0, 0};
}

inline PairShape family_shape(FamilyKind kind) {
  return (kind == FamilyKind::E || kind == FamilyKind::EPrime)
             ? PairShape::PathEven
             : PairShape::PathOdd;
}

inline Automaton build_family(FamilyKind kind, std::size_t n) {
  const auto [i, j] = family_merge(kind, n);
  return build_merge_automaton(family_shape(kind), n, i, j);
}

inline MatrixSet build_family_set(FamilyKind kind, std::size_t n) {
  const auto [i, j] = family_merge(kind, n);
  return build_merge_set(family_shape(kind), n, i, j);
}

/// Closed-form square graph diameter of the family member.
inline std::size_t sgd_formula(FamilyKind kind, std::size_t n) {
  require_family_size(kind, n);
  switch (kind) {
    case FamilyKind::E:
      return (n * n + 2 * n - 4) / 4;
    case FamilyKind::EPrime:
      return (n * n + 2 * n - 12) / 4;
    case FamilyKind::O:
      return (n * n + 3 * n - 8) / 4;
    case FamilyKind::OPrime:
      return (n * n + 3 * n - 6) / 4;
  }
  return 0;
}

/// Conjectured reset threshold of the family member.
inline std::size_t conjectured_reset_threshold(FamilyKind kind, std::size_t n) {
  require_family_size(kind, n);
  switch (kind) {
    case FamilyKind::E:
      return (n * n - 2) / 2;
    case FamilyKind::EPrime:
      return (n * n - 10) / 2;
    case FamilyKind::O:
    case FamilyKind::OPrime:
      return (n * n - 1) / 2;
  }
  return 0;
}

/// Block-permutation witness for {I + E_ij, Q1, Q2} of CycleEven shape.
///
/// A colour-preserving symmetry of the cycle first moves i to state 0
/// (a rotation by an even step when i is even, a reflection otherwise).
/// With j' the image of j, the witness is the parity partition when j' is
/// even; when j' is odd it pairs x with j'-x on [0, j'] and with n+j'-x on
/// [j'+1, n-1]. The result is pulled back to the original labels.
inline Partition witness_partition_cycle_pair(std::size_t n, std::size_t i,
                                              std::size_t j) {
  if (n % 2 != 0 || n < 4) throw InvalidInput("needs even n >= 4");
  if (i >= n || j >= n || i == j) throw InvalidInput("bad merge indices");
  auto relabel = [&](std::size_t x) -> std::size_t {
    return i % 2 == 0 ? (x + n - i) % n : (i + n - x) % n;
  };
  const std::size_t jr = relabel(j);
  std::vector<State> relabeled(n);
  for (std::size_t y = 0; y < n; ++y) {
    if (jr % 2 == 0) {
      relabeled[y] = static_cast<State>(y % 2);
    } else {
      const std::size_t partner = y <= jr ? jr - y : n + jr - y;
      relabeled[y] = static_cast<State>(std::min(y, partner));
    }
  }
  std::vector<State> original(n);
  for (std::size_t x = 0; x < n; ++x) original[x] = relabeled[relabel(x)];
  // Labels so far are block representatives; compact them.
  std::vector<State> compact(n, static_cast<State>(-1));
  State next = 0;
  for (std::size_t x = 0; x < n; ++x) {
    State& c = compact[original[x]];
    if (c == static_cast<State>(-1)) c = next++;
    original[x] = c;
  }
  return Partition(std::move(original));
}

}  // namespace synchro
