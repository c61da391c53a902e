#pragma once

#include "absint/domain/invariant_map.hpp"
#include "absint/imp/program.hpp"

#include <map>
#include <memory>
#include <set>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace absint {

struct Term;
using TermPtr = std::shared_ptr<const Term>;

// Right-hand side of a fixpoint equation.
struct Term {
  struct Const {
    AbstractState state;
  };
  struct Ref {
    Location loc;
  };
  struct Interpret {
    CmdPtr stmt;  // Assign or Skip
    TermPtr arg;
  };
  struct Filter {
    BoolPtr guard;
    TermPtr arg;
  };
  struct Join {
    TermPtr lhs, rhs;
  };
  std::variant<Const, Ref, Interpret, Filter, Join> node;
};

TermPtr const_term(AbstractState s);
TermPtr ref(Location l);
TermPtr interpret_term(CmdPtr stmt, TermPtr arg);
TermPtr filter_term(BoolPtr guard, TermPtr arg);
TermPtr join_term(TermPtr lhs, TermPtr rhs);

bool operator==(const Term& a, const Term& b);

struct FixpointEquation {
  Location location;
  TermPtr rhs;
};

bool operator==(const FixpointEquation& a, const FixpointEquation& b);

struct EquationSystem {
  UniversePtr universe;
  std::vector<FixpointEquation> equations;  // indexed by location
  // location -> locations whose equations mention it
  std::map<Location, std::set<Location>> deps;
  std::set<Location> loop_heads;
};

EquationSystem derive_fpes(const AnnotatedProgram& p);

// Locations a term mentions, ascending.
std::set<Location> references(const Term& t);
std::map<Location, std::set<Location>> dependencies(
    const std::vector<FixpointEquation>& eqs);

AbstractState evaluate(const Term& t, const InvariantMap& m);

// Canonical form for comparing equations written by different hands: join
// operands flattened, deduplicated and sorted (references by index first),
// negations pushed into comparisons, literal-first comparisons flipped to
// put the variable on the left. Idempotent.
TermPtr normalize(const TermPtr& t);
FixpointEquation normalize_fpe(const FixpointEquation& e);

// "F_3(M) = Filter(i <= 5, M({P2}) ⊔ M({P5}))". ASCII style writes the join
// as "U".
std::string render(const Term& t, RenderStyle style = {});
std::string render(const FixpointEquation& e, RenderStyle style = {});
std::string render(const EquationSystem& sys, RenderStyle style = {});

// One equation. Accepts LaTeX and the notations of hand-written systems: left sides F_3(M),
// F_3, M({P3}), {P3}; references M({P3}), {P3}, P3, P3(a); per-variable
// joins {a : P3(a) ⊔ P5(a)}; "read" without parentheses. Throws ParseError.
FixpointEquation parse_fpe(std::string_view text, const UniversePtr& u);

// Every line that starts like an equation; other lines are ignored. The
// first equation for a location wins, so state listings such as
// "M({P0}) = {x : bot}" further down do not replace it.
// With errors set, lines that fail to parse are reported there instead of
// throwing.
std::vector<FixpointEquation> parse_fpe_system(std::string_view text,
                                               const UniversePtr& u,
                                               std::vector<std::string>* errors = nullptr);

}  // namespace absint
