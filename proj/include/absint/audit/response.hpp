#pragma once

#include "absint/analysis/fpe.hpp"
#include "absint/domain/invariant_map.hpp"
#include "absint/prompt/prompt.hpp"

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace absint {

enum class StepOp {
  interpret,
  filter,
  join,
  widen,
  meet,
  fixpoint_claim,
  worklist_update,
  location_claim,  // "the abstract state at {Pk} is S", or a loose "so x is in [..]"
};
const char* to_string(StepOp op);

// Byte range in ParsedResponse::normalized.
struct Span {
  std::size_t begin = 0, end = 0;
};

struct ClaimedStep {
  StepOp op;
  Span span;
  // Atom for interpret, guard for filter. Fixpoint claims: "fixpoint" /
  // "not_fixpoint" (iteration comparison) or "unchanged" / "changed"
  // (worklist location).
  std::string subject;
  // nullopt marks an operand that looked like a state but did not parse.
  std::vector<std::optional<AbstractState>> inputs;
  std::optional<AbstractState> output;
  bool output_malformed = false;
  std::optional<Location> location;
  // Iteration fixpoint claims: index of the widening they rest on.
  std::optional<std::size_t> related;
  // Loose claims name only some variables.
  bool loose = false;
  std::map<std::string, Interval> partial;
  // Changed-claim implied by adding dependents to the worklist.
  bool implicit = false;
};

struct ParsedResponse {
  std::string normalized;
  std::optional<InvariantMap> final_map;
  std::optional<std::vector<FixpointEquation>> fpes;
  std::vector<ClaimedStep> steps;
  std::vector<std::string> diagnostics;
};

// Never throws on malformed text; problems end up in diagnostics. The last
// well-formed answer block ("the answer is" / "finished the analysis and M
// is") gives the final map. Equations are read only for the transitional
// strategy, from the text before the solving phase.
ParsedResponse parse_response(std::string_view text, Strategy s, const AnnotatedProgram& p);

}  // namespace absint
