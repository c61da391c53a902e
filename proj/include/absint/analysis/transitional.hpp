#pragma once

#include "absint/analysis/fpe.hpp"

#include <json.hpp>

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace absint {

class StepBudgetExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class WorklistOrder {
  lowest_index,  // always pick the smallest location in W
  fifo,
  lifo,
};

const char* to_string(WorklistOrder o);
// "lowest", "fifo", "lifo"; throws std::invalid_argument.
WorklistOrder parse_worklist_order(std::string_view s);

struct TransitionalOptions {
  WorklistOrder order = WorklistOrder::lowest_index;
  std::size_t step_budget = 100000;
};

// One intermediate value computed while evaluating an equation: the
// subterm, the states it consumed and the state it produced.
struct SubResult {
  TermPtr term;
  std::vector<AbstractState> operands;
  AbstractState result;
};

struct WorklistStep {
  Location picked;
  AbstractState before;    // M(picked) when it was picked
  AbstractState computed;  // the equation's value under M
  std::vector<SubResult> work;
  bool widened = false;
  AbstractState after;     // new M(picked)
  bool changed = false;
  std::vector<Location> added;     // dependents of a changed location (some may already be in W)
  std::vector<Location> worklist;  // W after this step, in pick order
};

struct TransitionalResult {
  EquationSystem system;
  InvariantMap map;
  std::vector<WorklistStep> steps;
};

TransitionalResult solve_worklist(const EquationSystem& sys,
                                  TransitionalOptions opt = {});
TransitionalResult run_transitional(const AnnotatedProgram& p,
                                    TransitionalOptions opt = {});

// Line-oriented narration in the layout of the worked examples: equations,
// initial map, one block per pick, final map.
std::string narrate(const TransitionalResult& r);

nlohmann::json to_json(const TransitionalResult& r);

}  // namespace absint
