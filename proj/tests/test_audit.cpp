#include <doctest.h>

#include "absint/analysis/compositional.hpp"
#include "absint/analysis/transitional.hpp"
#include "absint/audit/audit.hpp"
#include "absint/cfront/c_subset.hpp"
#include "absint/domain/parse.hpp"
#include "absint/imp/syntax.hpp"
#include "support/files.hpp"
#include "support/random_programs.hpp"

#include <set>

using namespace absint;
using testing_support::fixture;
using testing_support::slurp;
using testing_support::source_dir;

namespace {

AnnotatedProgram program(const std::string& name) {
  return parse_imp(fixture("programs/" + name + ".imp"));
}

std::string narration(const AnnotatedProgram& p, Strategy s) {
  if (s == Strategy::compositional) return narrate(p, run_compositional(p));
  return narrate(run_transitional(p));
}

std::set<ErrorTag> tags_of(const AuditReport& r) {
  std::set<ErrorTag> out;
  for (const auto& t : r.tags) out.insert(t.tag);
  return out;
}

std::size_t findings(const AuditReport& r) {
  std::size_t n = 0;
  for (const auto& v : r.steps) n += !v.unscorable && v.finding != Finding::none;
  return n;
}

AuditOptions quick() {
  AuditOptions o;
  o.fuzz = {200, 1, 2000};
  return o;
}

std::string replace_once(std::string s, const std::string& from, const std::string& to) {
  auto at = s.find(from);
  REQUIRE(at != std::string::npos);
  return s.replace(at, from.size(), to);
}

// Cuts [from, to) out of s; to is kept.
std::string cut(std::string s, const std::string& from, const std::string& to) {
  auto a = s.find(from);
  REQUIRE(a != std::string::npos);
  auto b = s.find(to, a);
  REQUIRE(b != std::string::npos);
  return s.erase(a, b - a);
}

const ClaimedStep* first_step(const ParsedResponse& r, StepOp op) {
  for (const auto& s : r.steps)
    if (s.op == op) return &s;
  return nullptr;
}

}  // namespace

TEST_CASE("score cells") {
  CHECK(score_cell(3, 7) == "3/7");
  CHECK(score_cell(0, 7) == "0/7");
  CHECK(score_cell(7, 7) == "7/7");
  CHECK(score_cell(std::nullopt, 7) == "-");
}

TEST_CASE("the reference narration audits clean") {
  for (const auto& name : {"running", "example1", "example2", "example3"}) {
    auto p = program(name);
    for (auto s : {Strategy::compositional, Strategy::transitional}) {
      CAPTURE(name);
      CAPTURE(to_string(s));
      auto r = audit(p, s, narration(p, s), quick());
      std::string all = std::to_string(p.location_count()) + "/" + std::to_string(p.location_count());
      CHECK(r.im_sound == all);
      if (s == Strategy::transitional) CHECK(r.fpe_correct == all);
      else CHECK(r.fpe_correct.empty());
      CHECK(findings(r) == 0);
      CHECK(r.tags.empty());
      for (const auto& v : r.per_location) CHECK(v.verdict == Verdict::sound_by_inclusion);
      CHECK(r.parsed.diagnostics.empty());
    }
  }
}

TEST_CASE("random programs: self-narration gives zero findings") {
  testing_support::Rng rng(99);
  testing_support::GenOptions opt;
  opt.max_depth = 2;
  std::size_t audited = 0;
  for (int n = 0; n < 150; ++n) {
    auto p = annotate(testing_support::random_block(rng, opt, opt.max_depth));
    for (auto s : {Strategy::compositional, Strategy::transitional}) {
      auto r = audit(p, s, narration(p, s), {{20, 0, 200}, "stop"});
      CHECK(findings(r) == 0);
      CHECK(r.tags.empty());
      CHECK(r.im_sound == std::to_string(p.location_count()) + "/" +
                              std::to_string(p.location_count()));
      ++audited;
    }
  }
  CHECK(audited == 300);
}

TEST_CASE("an explicit join is recomputed") {
  auto p = parse_imp("x := read(); if (x < 3) then skip; else skip; end");
  auto sys = derive_fpes(p);
  auto text = [](const std::string& result) {
    return "The result of the then-branch joined: {x : [0, 3]} ⊔ {x : [2, 4]} = " + result + ".";
  };
  auto good = parse_response(text("{x : [0, 4]}"), Strategy::compositional, p);
  const ClaimedStep* j = first_step(good, StepOp::join);
  REQUIRE(j);
  auto v = check_steps(good.steps, p, sys, std::nullopt);
  CHECK(v[0].match);
  CHECK(v[0].finding == Finding::none);
  CHECK(to_string(*v[0].recomputed) == "{x : [0, 4]}");

  auto bad = parse_response(text("{x : [0, 3]}"), Strategy::compositional, p);
  auto w = check_steps(bad.steps, p, sys, std::nullopt);
  CHECK_FALSE(w[0].match);
  CHECK(w[0].finding == Finding::operation);
}

TEST_CASE("a filter result that ignores the guard is an operation error") {
  auto p = parse_imp("i := 0; while (i <= 9) do i := i + 1; end");
  auto sys = derive_fpes(p);
  auto r = parse_response("Filtering {i : [0, 0]} by i <= 9 results in {i : [0, 9]}.",
                          Strategy::compositional, p);
  REQUIRE(r.steps.size() == 1);
  CHECK(r.steps[0].op == StepOp::filter);
  auto v = check_steps(r.steps, p, sys, std::nullopt);
  CHECK_FALSE(v[0].match);
  CHECK(v[0].finding == Finding::operation);
  CHECK(to_string(*v[0].recomputed) == "{i : [0, 0]}");
}

TEST_CASE("a join over the wrong loop location is an incorrect equation") {
  auto p = translate_c(slurp(source_dir() / "data/corpus/as2013-hybrid.c")).program;
  auto sys = derive_fpes(p);
  auto wrong = parse_fpe("F_5(M) = Filter(j < 10, M({P4}) ⊔ M({P7}))", p.universe());
  auto swapped = parse_fpe("F_5(M) = Filter(j < 10, M({P6}) ⊔ M({P4}))", p.universe());

  std::vector<FixpointEquation> claimed = sys.equations;
  claimed[5] = wrong;
  auto checks = check_fpes(claimed, sys.equations);
  for (std::size_t i = 0; i < checks.size(); ++i) {
    CAPTURE(i);
    CHECK(checks[i].verdict == (i == 5 ? FpeVerdict::incorrect : FpeVerdict::correct));
  }
  CHECK(checks[5].diff == "Filter.arg.Join[1]: M({P7}) vs M({P6})");

  claimed[5] = swapped;
  checks = check_fpes(claimed, sys.equations);
  CHECK(checks[5].verdict == FpeVerdict::correct);
  CHECK(checks[5].diff.empty());

  claimed.erase(claimed.begin() + 5);
  checks = check_fpes(claimed, sys.equations);
  CHECK(checks[5].verdict == FpeVerdict::missing);
  CHECK(check_fpes(std::nullopt, sys.equations)[0].verdict == FpeVerdict::missing);
}

TEST_CASE("term_diff paths") {
  auto u = program("example1").universe();
  auto a = parse_fpe("F_7(M) = M({P4}) ⊔ M({P6})", u).rhs;
  auto b = parse_fpe("F_7(M) = M({P4}) ⊔ M({P5})", u).rhs;
  CHECK(term_diff(*a, *a).empty());
  CHECK(term_diff(*a, *b) == "Join[1]: M({P6}) vs M({P5})");
  auto c = parse_fpe("F_3(M) = Interpret(x := x - 1, M({P2}))", u).rhs;
  CHECK(term_diff(*c, *a).rfind("rhs:", 0) == 0);
}

TEST_CASE("example 2: unsound claim with a witness, fuzz-only soundness") {
  auto p = program("example2");
  auto r = audit(p, Strategy::compositional, fixture("responses/example2.compositional.txt"), quick());
  REQUIRE(r.per_location.size() == 7);
  CHECK(r.im_sound == "6/7");
  CHECK(r.per_location[2].verdict == Verdict::sound_by_inclusion);
  CHECK(r.per_location[3].verdict == Verdict::unsound);
  CHECK(r.per_location[6].verdict == Verdict::sound_by_fuzz_only);

  REQUIRE(r.per_location[3].witness);
  const Witness& w = *r.per_location[3].witness;
  CHECK(w.location == Location{3});
  CHECK(w.store == Store{5, 10});
  auto claim = parse_state("{i : [1, 5], j : [0, 9]}", p.universe());
  CHECK(witness_replays(ConcreteProgram(p), w, claim, quick().fuzz));

  // Same verdicts from the serial fuzzer.
  InvariantMap claimed = *r.parsed.final_map;
  auto ref = run_compositional(p).map;
  ConcreteProgram cp(p);
  auto serial = check_map_soundness(claimed, ref, cp, fuzz_serial(cp, quick().fuzz), quick().fuzz);
  auto parallel = check_map_soundness(claimed, ref, cp, fuzz_parallel(cp, quick().fuzz), quick().fuzz);
  REQUIRE(serial.size() == parallel.size());
  for (std::size_t i = 0; i < serial.size(); ++i) {
    CHECK(serial[i].verdict == parallel[i].verdict);
    CHECK(serial[i].verdict == r.per_location[i].verdict);
  }
}

TEST_CASE("example 1: hand-audited transitional answer") {
  auto p = program("example1");
  auto r = audit(p, Strategy::transitional, fixture("responses/example1.transitional.txt"), quick());
  CHECK(r.im_sound == "6/8");
  CHECK(r.fpe_correct == "7/8");
  CHECK(r.per_location[4].verdict == Verdict::unsound);
  CHECK(r.per_location[5].verdict == Verdict::missing);
  REQUIRE(r.fpe_per_location);
  CHECK((*r.fpe_per_location)[6].verdict == FpeVerdict::incorrect);
  CHECK((*r.fpe_per_location)[6].diff == "Interpret.arg: M({P1}) vs M({P5})");
  CHECK((*r.fpe_per_location)[7].verdict == FpeVerdict::correct);  // operands swapped
  CHECK(tags_of(r) == std::set<ErrorTag>{ErrorTag::control_flow});
}

TEST_CASE("missing or unparsable answers score as '-'") {
  auto p = program("example2");
  for (auto s : {Strategy::compositional, Strategy::transitional}) {
    auto r = audit(p, s, "", quick());
    CHECK(r.im_sound == "-");
    CHECK_FALSE(r.parsed.final_map);
    for (const auto& v : r.per_location) CHECK(v.verdict == Verdict::missing);
    if (s == Strategy::transitional) CHECK(r.fpe_correct == "-");
  }
  auto r = audit(p, Strategy::compositional, "I could not analyze this program.", quick());
  CHECK(r.im_sound == "-");
}

TEST_CASE("a false fixpoint and a wrong transfer get their tags") {
  auto p = program("example2");
  std::string text = narration(p, Strategy::compositional);
  // Wrong result for j := j + i in the first iteration.
  text = replace_once(text, "The resulting abstract state is {i : [1, 1], j : [1, 1]}.",
                      "The resulting abstract state is {i : [1, 1], j : [0, 1]}.");
  // Declare the fixpoint right after the first iteration.
  text = cut(text, "  - Fixed point Iteration 2:", "  - We are at a fixed point.");
  auto r = audit(p, Strategy::compositional, text, quick());
  CHECK(tags_of(r) == std::set<ErrorTag>{ErrorTag::fixpoint, ErrorTag::operation});
  CHECK(r.im_sound == "7/7");
}

TEST_CASE("a loop summarized in one jump is a short circuit") {
  auto p = parse_imp("x := 0; y := 0; while (x < 1000000) do x := x + 1; end");
  std::string text =
      "1. Interpret x := 0;\n"
      "  - The input abstract state is {x : [-inf, inf], y : [-inf, inf]}.\n"
      "  - The resulting abstract state is {x : [0, 0], y : [-inf, inf]}.\n"
      "  - As a side-effect, the abstract state at {P1} is {x : [0, 0], y : [-inf, inf]}.\n"
      "2. Interpret y := 0;\n"
      "  - The input abstract state is {x : [0, 0], y : [-inf, inf]}.\n"
      "  - The resulting abstract state is {x : [0, 0], y : [0, 0]}.\n"
      "  - As a side-effect, the abstract state at {P2} is {x : [0, 0], y : [0, 0]}.\n"
      "3. Interpret the while loop.\n"
      "  - The loop only increments x until it reaches 1000000. So x is in [950000, inf], y is [0, 0].\n"
      "\nThere are no more statements to interpret, and the answer is\n\n"
      "{P0} ↦ {x : [-inf, inf], y : [-inf, inf]}\n"
      "{P1} ↦ {x : [0, 0], y : [-inf, inf]}\n"
      "{P2} ↦ {x : [0, 0], y : [0, 0]}\n"
      "{P3} ↦ {x : [0, 999999], y : [0, 0]}\n"
      "{P4} ↦ {x : [1, 1000000], y : [0, 0]}\n"
      "{P5} ↦ {x : [1000000, 1000000], y : [0, 0]}\n";
  auto r = audit(p, Strategy::compositional, text, quick());
  CHECK(tags_of(r) == std::set<ErrorTag>{ErrorTag::short_circuit});
  const ClaimedStep* loose = nullptr;
  for (const auto& s : r.parsed.steps)
    if (s.loose) loose = &s;
  REQUIRE(loose);
  CHECK(loose->partial.size() == 2);
  // Every claimed invariant is true, but P3 and P4 hold only by the fuzzer.
  CHECK(r.im_sound == "6/6");
}

TEST_CASE("truncated output is tagged") {
  auto p = program("example2");
  std::string text = narration(p, Strategy::transitional);
  text.resize(text.size() / 3);
  AuditOptions o = quick();
  o.finish_reason = "length";
  auto r = audit(p, Strategy::transitional, text, o);
  CHECK(tags_of(r).count(ErrorTag::truncation) == 1);
  CHECK(r.im_sound == "-");
  CHECK(r.fpe_correct == "7/7");
}

TEST_CASE("transitional narration of example 1 parses completely") {
  auto p = program("example1");
  auto r = parse_response(narration(p, Strategy::transitional), Strategy::transitional, p);
  REQUIRE(r.fpes);
  CHECK(r.fpes->size() == 8);
  std::size_t updates = 0;
  for (const auto& s : r.steps) updates += s.op == StepOp::worklist_update;
  CHECK(updates >= 8);
  REQUIRE(r.final_map);
  CHECK(*r.final_map == run_transitional(p).map);
}

TEST_CASE("report json") {
  auto p = program("example2");
  auto r = audit(p, Strategy::compositional, fixture("responses/example2.compositional.txt"), quick());
  auto j = to_json(r, p);
  CHECK(j.at("strategy") == "compositional");
  CHECK(j.at("scores").at("im_sound") == "6/7");
  CHECK(j.at("scores").at("fpe_correct").is_null());
  CHECK(j.at("per_location").at(3).at("verdict") == "unsound");
  CHECK(j.at("per_location").at(3).at("witness").at("store").at("j") == 10);
  CHECK(j.at("fuzz").at("runs") == 200);
  CHECK(j.dump() == to_json(audit(p, Strategy::compositional,
                                  fixture("responses/example2.compositional.txt"), quick()),
                            p)
                        .dump());
  CHECK_FALSE(render_report(r).empty());
}
