#pragma once

#include "absint/domain/invariant_map.hpp"
#include "absint/imp/program.hpp"

#include <json.hpp>

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace absint {

class IterationBudgetExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class EventKind {
  interpret_stmt,   // subject: statement; inputs[0] -> output
  filter,           // subject: guard; inputs[0] -> output
  join_branches,    // inputs: then-result, else-result
  widen,            // inputs: S_k, body result
  fixpoint_check,   // inputs: S_k, S_{k+1}; reached says whether they agree
  record_location,  // output stored at location
  branch_begin,     // subject: "then" / "else"
  if_begin,
  loop_begin,       // subject: guard; inputs[0] is the loop input; location: head
  iteration_begin,  // inputs[0] is S_k
  loop_end,         // subject: negated guard; inputs[0] fixpoint
};

const char* to_string(EventKind k);

struct TraceEvent {
  EventKind kind;
  std::string subject;
  std::vector<AbstractState> inputs;
  std::optional<AbstractState> output;
  std::optional<Location> location;
  std::size_t loop_depth = 0;
  std::size_t iteration = 0;
  bool reached = false;
};

struct CompositionalOptions {
  std::size_t iteration_budget = 1000;
};

struct CompositionalResult {
  InvariantMap map;
  std::vector<TraceEvent> trace;
  // loop head -> number of fixpoint iterations of its last run
  std::map<Location, std::size_t> iterations;
};

CompositionalResult run_compositional(const AnnotatedProgram& p,
                                      CompositionalOptions opt = {});

// Line-oriented narration in the style of the worked walkthroughs; ends with the
// "the answer is" block.
std::string narrate(const AnnotatedProgram& p, const CompositionalResult& r);

nlohmann::json to_json(const CompositionalResult& r);

}  // namespace absint
