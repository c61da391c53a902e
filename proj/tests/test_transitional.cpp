#include <doctest.h>

#include "absint/analysis/compositional.hpp"
#include "absint/analysis/transitional.hpp"
#include "absint/domain/parse.hpp"
#include "absint/imp/syntax.hpp"
#include "support/files.hpp"
#include "support/random_programs.hpp"

using namespace absint;
using testing_support::fixture;

namespace {

AnnotatedProgram program(const std::string& name) {
  return parse_imp(fixture("programs/" + name + ".imp"));
}

std::vector<std::string> rendered(const std::vector<FixpointEquation>& eqs) {
  std::vector<std::string> out;
  for (const auto& e : eqs) out.push_back(render(e, RenderStyle{true}));
  return out;
}

CmdPtr random_program(testing_support::Rng& rng) {
  testing_support::GenOptions opt;
  return testing_support::random_block(rng, opt, opt.max_depth);
}

}  // namespace

TEST_CASE("derived equations match the hand-written systems") {
  for (const auto& [prog, tex] : std::vector<std::pair<std::string, std::string>>{
           {"running", "running"},
           {"example1", "example1"},
           {"example2", "example2"},
           {"example3", "example3"}}) {
    CAPTURE(prog);
    auto p = program(prog);
    auto sys = derive_fpes(p);
    auto written = parse_fpe_system(fixture("fpe/" + tex + ".tex"), p.universe());
    REQUIRE(written.size() == p.location_count());
    CHECK(rendered(written) == rendered(sys.equations));
    for (std::size_t i = 0; i < written.size(); ++i) {
      CHECK(written[i] == sys.equations[i]);
      CHECK(normalize_fpe(written[i]) == normalize_fpe(sys.equations[i]));
    }
  }
}

TEST_CASE("running example equations render") {
  auto sys = derive_fpes(program("running"));
  auto text = render(sys, RenderStyle{true});
  CHECK(text ==
        "F_0(M) = {a : [-∞, ∞]}\n"
        "F_1(M) = Interpret(a := read(), M({P0}))\n"
        "F_2(M) = Filter(a > 6, M({P1}))\n"
        "F_3(M) = Interpret(a := 0, M({P2}))\n"
        "F_4(M) = Filter(a <= 6, M({P1}))\n"
        "F_5(M) = Interpret(skip, M({P4}))\n"
        "F_6(M) = M({P3}) ⊔ M({P5})\n"
        "F_7(M) = Filter(a < 6, M({P6}) ⊔ M({P8}))\n"
        "F_8(M) = Interpret(a := a + 1, M({P7}))\n"
        "F_9(M) = Filter(a >= 6, M({P6}) ⊔ M({P8}))\n");
  CHECK(sys.loop_heads == std::set<Location>{Location{7}});
  CHECK(sys.deps.at(Location{8}) == std::set<Location>{Location{7}, Location{9}});
  CHECK(sys.deps.at(Location{9}).empty());
}

TEST_CASE("straight-line systems are chains of Interpret") {
  auto sys = derive_fpes(parse_imp("x := 1; y := x; skip;"));
  REQUIRE(sys.equations.size() == 4);
  for (std::size_t i = 1; i < 4; ++i) {
    const auto* in = std::get_if<Term::Interpret>(&sys.equations[i].rhs->node);
    REQUIRE(in);
    CHECK(*in->arg == *ref(Location{i - 1}));
  }
  CHECK(sys.loop_heads.empty());
}

TEST_CASE("normalize_fpe") {
  auto u = std::make_shared<const Universe>(Universe{"a", "x"});
  auto n = [&](const std::string& s) {
    return render(normalize_fpe(parse_fpe(s, u)));
  };
  CHECK(n("F_1(M) = M({P8}) ⊔ M({P6})") == "F_1(M) = M({P6}) U M({P8})");
  CHECK(n("F_1(M) = Filter(!(!(a < 6)), M({P0}))") == "F_1(M) = Filter(a < 6, M({P0}))");
  CHECK(n("F_1(M) = Filter(!(a < 6), M({P0}))") == "F_1(M) = Filter(a >= 6, M({P0}))");
  CHECK(n("F_1(M) = Filter(6 > a, M({P0}))") == "F_1(M) = Filter(a < 6, M({P0}))");
  CHECK(n("F_1(M) = Filter(!(a == 6), M({P0}))") == "F_1(M) = Filter(!(a == 6), M({P0}))");
  CHECK(n("F_3(M) = M({P2}) ⊔ (M({P1}) ⊔ M({P2}))") == "F_3(M) = M({P1}) U M({P2})");
  auto p7 = parse_fpe(R"(M(\{P7\}) &= Filter(a < 6, P6(a) \sqcup P8(a)) \\)",
                      std::make_shared<const Universe>(Universe{"a"}));
  CHECK(normalize_fpe(p7) == p7);
}

TEST_CASE("equation parser notations") {
  auto u = std::make_shared<const Universe>(Universe{"i", "j"});
  auto base = parse_fpe("F_3(M) = Filter(i <= 5, M({P2}) ⊔ M({P5}))", u);
  for (const char* s : {
           "F_3 = Filter(i <= 5, M({P2}) U M({P5}))",
           "M({P3}) = Filter(i ≤ 5, {P2} ⊔ {P5})",
           "{P3} = filter(i <= 5, P2 ⊔ P5).",
           "- F_{3}(M) = \\text{Filter}(i \\le 5, M(\\{P_{2}\\}) \\cup M(\\{P_5\\}))",
           "$F_3(M) = \\mathtt{Filter}(\\mathtt{i <= 5}, Join(M({P2}), M({P5})))$",
           "M({P3}) = {i : Filter(i <= 5, P2(i) ⊔ P5(i)), j : Filter(i <= 5, P2(j) ⊔ P5(j))}",
       }) {
    CAPTURE(s);
    CHECK(parse_fpe(s, u) == base);
  }
  auto c = parse_fpe("F_0(M) = {i : [-\\infty, \\infty], j : ⊥}", u);
  CHECK(render(c) == "F_0(M) = {i : bot, j : bot}");
  CHECK(render(parse_fpe("F_2(M) = Interpret(i = i + 1, M({P1}))", u)) ==
        "F_2(M) = Interpret(i := i + 1, M({P1}))");

  CHECK_THROWS_AS(parse_fpe("F_3(M) = Filter(i <=, M({P2}))", u), ParseError);
  CHECK_THROWS_AS(parse_fpe("the answer is 42", u), ParseError);
  CHECK_THROWS_AS(parse_fpe("F_3(M) = {i : P2(i), j : P5(j)}", u), ParseError);
  CHECK_THROWS_AS(parse_fpe("F_3(M) = Filter(i < 5, M({P2})) junk", u), ParseError);
}

TEST_CASE("system parser keeps the first equation per location") {
  auto u = std::make_shared<const Universe>(Universe{"x"});
  auto eqs = parse_fpe_system(
      "1. Create the equations.\n"
      "F_1(M) = Interpret(x := 1, M({P0}))\n"
      "F_0(M) = {x : [-inf, inf]}\n"
      "Initially:\n"
      "M({P0}) = {x : bot}\n",
      u);
  REQUIRE(eqs.size() == 2);
  CHECK(eqs[0].location == Location{0});
  CHECK(render(eqs[0]) == "F_0(M) = {x : [-inf, inf]}");
}

TEST_CASE("worked examples: transitional final maps") {
  CHECK(to_string(run_transitional(program("example1")).map) ==
        fixture("golden/example1.map"));
  CHECK(to_string(run_transitional(program("example2")).map) ==
        fixture("golden/example2.transitional.map"));
  CHECK(to_string(run_transitional(program("example3")).map) ==
        fixture("golden/example3.map"));
  auto running = run_transitional(program("running"));
  CHECK(to_string(running.map.at(Location{9})) == "{a : [6, 6]}");
}

TEST_CASE("example 2 pick order and worklist contents") {
  auto r = run_transitional(program("example2"));
  std::vector<std::size_t> picks;
  for (const auto& s : r.steps) picks.push_back(s.picked.index);
  CHECK(picks == std::vector<std::size_t>{0, 1, 2, 3, 4, 5, 3, 4, 5, 3, 6});
  // second visit of P3 widens [1,1] by [1,2]
  const auto& widen = r.steps[6];
  CHECK(widen.widened);
  CHECK(to_string(widen.computed) == "{i : [1, 2], j : [0, 1]}");
  CHECK(to_string(widen.after) == "{i : [1, inf], j : [0, inf]}");
  CHECK(to_string(Location{4}) == to_string(widen.worklist.front()));
  CHECK(widen.worklist.size() == 2);
  CHECK_FALSE(r.steps[9].changed);

  auto text = narrate(r);
  CHECK(text.find("Because {P3} corresponds to a loop head, we widen M({P3})") !=
        std::string::npos);
  CHECK(text.find("M({P3}) has not changed, so do not add anything to the worklist.") !=
        std::string::npos);
  CHECK(text.find("The worklist W is {{P0}, {P1}, {P2}, {P3}, {P4}, {P5}, {P6}}.") !=
        std::string::npos);
  CHECK(text.find("    - Add {P3} and {P6} to W.") != std::string::npos);
  auto json = to_json(r);
  CHECK(json["steps"].size() == 11);
  CHECK(json["map"]["{P6}"] == "{i : [6, inf], j : [0, inf]}");
}

TEST_CASE("strategies agree on the worked examples without nested widening") {
  for (const char* name : {"example1", "example3"}) {
    auto p = program(name);
    CHECK(run_transitional(p).map == run_compositional(p).map);
  }
}

TEST_CASE("random systems: render/parse round trip and dependency re-scan") {
  testing_support::Rng rng(11);
  for (int n = 0; n < 300; ++n) {
    auto p = annotate(random_program(rng));
    auto sys = derive_fpes(p);
    REQUIRE(sys.equations.size() == p.location_count());
    for (bool unicode : {false, true}) {
      auto back = parse_fpe_system(render(sys, RenderStyle{unicode}), p.universe());
      REQUIRE(back.size() == sys.equations.size());
      for (std::size_t i = 0; i < back.size(); ++i) CHECK(back[i] == sys.equations[i]);
    }
    for (std::size_t l = 0; l < sys.equations.size(); ++l) {
      std::string needle = "M({P" + std::to_string(l) + "})";
      std::set<Location> expect;
      for (const auto& e : sys.equations)
        if (render(*e.rhs).find(needle) != std::string::npos) expect.insert(e.location);
      CHECK(sys.deps.at(Location{l}) == expect);
    }
    for (const auto& e : sys.equations) {
      auto once = normalize_fpe(e);
      CHECK(normalize_fpe(once) == once);
    }
  }
}

TEST_CASE("random systems: every order ends in a post-fixpoint") {
  testing_support::Rng rng(12);
  for (int n = 0; n < 300; ++n) {
    auto p = annotate(random_program(rng));
    auto sys = derive_fpes(p);
    for (auto order : {WorklistOrder::lowest_index, WorklistOrder::fifo,
                       WorklistOrder::lifo}) {
      auto r = solve_worklist(sys, {order});
      for (const auto& e : sys.equations) {
        auto v = evaluate(*e.rhs, r.map);
        if (sys.loop_heads.count(e.location))
          CHECK(state_leq(v, r.map.at(e.location)));
        else
          CHECK(v == r.map.at(e.location));
      }
      CHECK_NOTHROW(narrate(r));
    }
  }
}

TEST_CASE("worklist order names") {
  CHECK(parse_worklist_order("fifo") == WorklistOrder::fifo);
  CHECK(std::string(to_string(WorklistOrder::lowest_index)) == "lowest");
  CHECK_THROWS_AS(parse_worklist_order("random"), std::invalid_argument);
}
