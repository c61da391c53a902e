#pragma once

#include "absint/audit/audit.hpp"

#include <set>
#include <string>
#include <vector>

namespace absint {

// A reference narration with one seeded reasoning error, and the tag the
// auditor has to report for it.
struct Mutant {
  std::string kind;
  Strategy strategy = Strategy::compositional;
  ErrorTag expected = ErrorTag::operation;
  std::string site;  // what was changed, for failure messages
  std::string text;
};

// Kinds, by strategy:
//   compositional: back_propagation, false_fixpoint, filter_inflation,
//                  short_circuit, arithmetic_slip
//   transitional:  wrong_join_operand, skipped_widening, false_unchanged,
//                  arithmetic_slip
// At most one mutant per kind: the first eligible site. Kinds without a
// site in p are left out.
std::vector<Mutant> mutants(const AnnotatedProgram& p);

// A state that differs from s: the first variable with a finite bound gets
// it moved outward by one, a state of all-top intervals gets its first
// variable pinned to [0, 0]. nullopt for bottom or variable-free states.
std::optional<AbstractState> perturb(const AbstractState& s);

}  // namespace absint
