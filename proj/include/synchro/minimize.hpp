#pragma once

#include <cstddef>

#include "synchro/automaton.hpp"
#include "synchro/config.hpp"
#include "synchro/matrix_set.hpp"
#include "synchro/primitivity.hpp"
#include "synchro/square_graph.hpp"

namespace synchro {

/// Minimal synchronizing automaton obtained from the associated automaton
/// of a perturbed-permutation set {P_1, ..., P_m + E_ij}, trusting that the
/// set is minimally primitive (the generator output path knows this).
///
/// A(s) has the letters P_1..P_m plus the perturbed letter. If that is not
/// already minimally synchronizing, dropping the base permutation P_m of the
/// perturbed matrix gives a minimally synchronizing automaton.
inline Automaton minimize_associated_automaton_unchecked(const Automaton& a,
                                                         const MatrixSet& s) {
  const auto view = as_perturbed_permutation_set(s);
  if (!view) throw InvalidInput("set is not a perturbed-permutation set");
  if (is_minimally_synchronizing(a)) return a;
  const Letter& base = view->base.image();
  for (std::size_t k = 0; k < a.size(); ++k) {
    if (a[k] == base) return a.without(k);
  }
  throw InvalidInput("base permutation missing from the automaton");
}

/// Checked form: `s` must be minimally primitive and `a` must be A(s).
inline Automaton minimize_associated_automaton(const Automaton& a,
                                               const MatrixSet& s) {
  if (!a.same_letters(associated_automaton(s))) {
    throw InvalidInput("automaton is not the associated automaton of the set");
  }
  if (!is_minimally_primitive(s)) {
    throw InvalidInput("set is not minimally primitive");
  }
  return minimize_associated_automaton_unchecked(a, s);
}

}  // namespace synchro
