#include <doctest.h>

#include "absint/analysis/compositional.hpp"
#include "absint/imp/syntax.hpp"
#include "support/files.hpp"
#include "support/random_programs.hpp"

#include <map>

using namespace absint;
using testing_support::fixture;

namespace {

std::string map_of(const std::string& program) {
  auto p = parse_imp(fixture("programs/" + program + ".imp"));
  return to_string(run_compositional(p).map);
}

std::string at(const CompositionalResult& r, std::size_t k) {
  return to_string(r.map.at(Location{k}));
}

}  // namespace

TEST_CASE("worked examples: compositional final maps") {
  CHECK(map_of("example1") == fixture("golden/example1.map"));
  CHECK(map_of("example2") == fixture("golden/example2.compositional.map"));
  CHECK(map_of("example3") == fixture("golden/example3.map"));
}

TEST_CASE("example 2 converges after two iterations") {
  auto p = parse_imp(fixture("programs/example2.imp"));
  auto r = run_compositional(p);
  CHECK(r.iterations.at(Location{3}) == 2);
}

TEST_CASE("running example exit state") {
  auto p = parse_imp(fixture("programs/running.imp"));
  auto r = run_compositional(p);
  // every path leaves the loop with a == 6
  CHECK(at(r, 9) == "{a : [6, 6]}");
  CHECK(at(r, 6) == "{a : [-inf, 6]}");
  CHECK(at(r, 7) == "{a : [-inf, 5]}");
}

TEST_CASE("straight line and dead code") {
  auto r = run_compositional(parse_imp("x := 1;"));
  CHECK(at(r, 0) == "{x : [-inf, inf]}");
  CHECK(at(r, 1) == "{x : [1, 1]}");

  auto dead = run_compositional(parse_imp("x := 1; if (x > 5) then skip; else skip; end"));
  CHECK(at(dead, 2) == "{x : bot}");
  CHECK(at(dead, 3) == "{x : bot}");
  CHECK(at(dead, 6) == "{x : [1, 1]}");

  auto loop = run_compositional(parse_imp("while (false) do x := x + 1; end"));
  CHECK(at(loop, 1) == "{x : bot}");
  CHECK(at(loop, 2) == "{x : bot}");
  CHECK(at(loop, 3) == "{x : [-inf, inf]}");
}

TEST_CASE("narration follows the walkthrough layout") {
  auto p = parse_imp(fixture("programs/example2.imp"));
  auto r = run_compositional(p);
  auto text = narrate(p, r);
  CHECK(text.find("Initially, the abstract state at {P0} is {i : [-inf, inf], j : [-inf, inf]}.") == 0);
  CHECK(text.find("3. Interpret the while loop.") != std::string::npos);
  CHECK(text.find("  - Fixed point Iteration 2:") != std::string::npos);
  CHECK(text.find("{i : [1, 1], j : [0, 0]} ∇ {i : [2, 2], j : [1, 1]} results in "
                  "{i : [1, inf], j : [0, inf]}.") != std::string::npos);
  CHECK(text.find("We are at a fixed point.") != std::string::npos);
  auto tail = text.substr(text.find("the answer is\n\n") + 15);
  CHECK(tail == fixture("golden/example2.compositional.map"));
}

TEST_CASE("json record carries events and map") {
  auto p = parse_imp(fixture("programs/example3.imp"));
  auto j = to_json(run_compositional(p));
  CHECK(j["map"]["{P7}"] == "{x : bot, y : bot}");
  CHECK(j["events"].size() > 10);
  CHECK(j["events"][0]["kind"] == "record_location");
}

TEST_CASE("random programs: termination, totality, ascending loop heads") {
  testing_support::Rng rng(7);
  testing_support::GenOptions opt;
  for (int n = 0; n < 300; ++n) {
    auto p = annotate(testing_support::random_block(rng, opt, opt.max_depth));
    auto r = run_compositional(p);
    REQUIRE(r.map.complete());
    CHECK(r.map.size() == p.location_count());
    for (const auto& [head, k] : r.iterations) CHECK(k >= 1);
    // within one loop run, head recordings form an ascending chain
    std::map<std::size_t, AbstractState> last;
    for (const auto& e : r.trace) {
      if (e.kind == EventKind::loop_begin) last.erase(e.location->index);
      if (e.kind != EventKind::filter || !p.is_loop_head(*e.location)) continue;
      auto key = e.location->index;
      if (auto it = last.find(key); it != last.end()) CHECK(state_leq(it->second, *e.output));
      last[key] = *e.output;
    }
    CHECK_NOTHROW(narrate(p, r));
  }
}
