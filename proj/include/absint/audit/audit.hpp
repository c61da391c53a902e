#pragma once

#include "absint/audit/fuzz.hpp"
#include "absint/audit/response.hpp"

#include <json.hpp>

#include <optional>
#include <string>
#include <vector>

namespace absint {

enum class Verdict { sound_by_inclusion, sound_by_fuzz_only, unsound, missing };
const char* to_string(Verdict v);
// Sound for scoring: by inclusion or by surviving the fuzz oracle.
inline bool counts_as_sound(Verdict v) {
  return v == Verdict::sound_by_inclusion || v == Verdict::sound_by_fuzz_only;
}

struct LocationVerdict {
  Location location;
  Verdict verdict = Verdict::missing;
  std::optional<Witness> witness;
};

// ref(l) ⊑ map(l) decides soundness when it holds; otherwise the summary
// either refutes map(l) (unsound, with a witness) or does not. Throws
// UniverseMismatch when the maps range over different variables.
std::vector<LocationVerdict> check_map_soundness(const InvariantMap& map, const InvariantMap& ref,
                                                 const ConcreteProgram& cp,
                                                 const FuzzSummary& summary,
                                                 const FuzzConfig& cfg);
std::vector<LocationVerdict> check_map_soundness(const AnnotatedProgram& p, const InvariantMap& map,
                                                 const InvariantMap& ref, const FuzzConfig& cfg);

enum class FpeVerdict { correct, incorrect, missing };
const char* to_string(FpeVerdict v);

struct FpeCheck {
  Location location;
  FpeVerdict verdict = FpeVerdict::missing;
  std::string diff;  // first differing subterm, for incorrect equations
};

// First structural difference between two terms, "" when equal. Paths read
// like "Filter.arg.Join[1]: M({P7}) vs M({P6})".
std::string term_diff(const Term& got, const Term& want);

// Both sides are compared after normalize_fpe.
std::vector<FpeCheck> check_fpes(const std::optional<std::vector<FixpointEquation>>& claimed,
                                 const std::vector<FixpointEquation>& ref);

enum class Finding {
  none,
  operation,         // recomputing the step gives a different state
  wrong_location,    // the result is attributed to a location the step cannot produce
  input_mismatch,    // the step consumed something other than its source location's claim
  missing_widening,  // loop-head update without widening
  false_fixpoint,    // fixpoint / changed claim contradicted by the states
  unsupported,       // claim with no deriving step that skips locations
  underivable,       // claim with no deriving step, no locations skipped
};
const char* to_string(Finding f);

struct StepVerdict {
  std::size_t step = 0;
  std::optional<AbstractState> recomputed;
  bool match = true;
  bool unscorable = false;
  Finding finding = Finding::none;
};

// Recomputes every claimed step with the reference operations. Worklist
// updates are re-evaluated with the model's own equation for the location
// when it has one, over the states the model has claimed so far.
std::vector<StepVerdict> check_steps(const std::vector<ClaimedStep>& steps,
                                     const AnnotatedProgram& p, const EquationSystem& ref,
                                     const std::optional<std::vector<FixpointEquation>>& model_fpes);

enum class ErrorTag { control_flow, fixpoint, operation, short_circuit, truncation };
const char* to_string(ErrorTag t);

struct TagEvidence {
  ErrorTag tag;
  std::vector<std::size_t> steps;
  std::vector<std::string> notes;
};

std::vector<TagEvidence> classify_errors(const ParsedResponse& r,
                                         const std::vector<StepVerdict>& verdicts,
                                         const std::vector<FpeCheck>& fpes,
                                         const std::string& finish_reason);

// "x/y", or "-" when there is nothing to score.
std::string score_cell(std::optional<std::size_t> x, std::size_t y);

struct AuditOptions {
  FuzzConfig fuzz;
  std::string finish_reason = "stop";
};

struct AuditReport {
  Strategy strategy = Strategy::compositional;
  std::size_t location_count = 0;
  ParsedResponse parsed;
  std::vector<LocationVerdict> per_location;
  std::optional<std::vector<FpeCheck>> fpe_per_location;  // transitional only
  std::vector<StepVerdict> steps;
  std::vector<TagEvidence> tags;
  std::string im_sound;     // "x/y" or "-"
  std::string fpe_correct;  // "x/y" or "-"; empty for compositional
  std::optional<FuzzSummary> fuzz;
  FuzzConfig fuzz_config;
};

AuditReport audit(const AnnotatedProgram& p, Strategy s, std::string_view response,
                  const AuditOptions& opt = {});

nlohmann::json to_json(const AuditReport& r, const AnnotatedProgram& p);
// Location table plus tags, for terminals.
std::string render_report(const AuditReport& r);

}  // namespace absint
