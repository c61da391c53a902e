#include <doctest.h>

#include "absint/domain/parse.hpp"
#include "support/random_programs.hpp"

using namespace absint;

namespace {

UniversePtr xy() { return std::make_shared<const Universe>(Universe{"x", "y"}); }

}  // namespace

TEST_CASE("normalize_math") {
  CHECK(normalize_math(R"($M(\{P_{3}\}) = \{x : [-\infty, 3]\}$)") == "M({P3}) = {x : [-inf, 3]}");
  CHECK(normalize_math(R"(\text{Filter}(x \leq 5, M(\{P_2\}) \sqcup M(\{P_5\})))") ==
        "Filter(x <= 5, M({P2}) ⊔ M({P5}))");
  CHECK(normalize_math("x ≥ 3 ∧ y ≠ 2") == "x >= 3 && y != 2");
  CHECK(normalize_math("[−∞, ∞]") == "[-inf, inf]");
  CHECK(normalize_math(R"(F_0(M) &= \{x : \bot\} \\)") == "F_0(M) = {x : bot} \n");
  CHECK(normalize_math(R"(\mathtt{x := read()})") == "x := read()");
  CHECK(normalize_math("a && b") == "a && b");
}

TEST_CASE("parse_interval") {
  CHECK(parse_interval("[1, 4]") == Interval::range(1, 4));
  CHECK(parse_interval("[-inf, 2]") == Interval::range(Bound::neg_inf(), 2));
  CHECK(parse_interval("(-∞, +∞)") == Interval::top());
  CHECK(parse_interval(R"([-\inf,\inf])") == Interval::top());
  CHECK(parse_interval("⊥").is_bottom());
  CHECK(parse_interval("[5, 3]").is_bottom());
  CHECK(parse_interval("[99999999999999999999, 99999999999999999999]") ==
        Interval::constant(Integer("99999999999999999999")));
  CHECK_THROWS_AS(parse_interval("[1, ]"), ParseError);
  CHECK_THROWS_AS(parse_interval("[1, 2] x"), ParseError);
}

TEST_CASE("parse_state") {
  auto u = xy();
  auto s = parse_state("{x : [1, 4], y : [-inf, 0]}", u);
  CHECK(to_string(s) == "{x : [1, 4], y : [-inf, 0]}");
  CHECK(parse_state("{y ↦ [-∞, 0]; x -> [1, 4]}", u) == s);
  CHECK(parse_state(R"(\{x : [1, 4], y : [-\infty, 0]\})", u) == s);
  CHECK(parse_state("{x : [1, 4], y : bot}", u).is_bottom());
  CHECK(parse_state("⊥", u).is_bottom());
  CHECK(parse_state("top", u) == AbstractState::top(u));
  CHECK_THROWS_AS(parse_state("{x : [1, 4]}", u), ParseError);
  CHECK_THROWS_AS(parse_state("{x : [1, 4], z : [0, 0]}", u), ParseError);
  CHECK_THROWS_AS(parse_state("{x : [1, 4], x : [0, 0], y : bot}", u), ParseError);
  CHECK_THROWS_AS(parse_state("{x : [1, 4], y : [0, 0]", u), ParseError);
}

TEST_CASE("rendered states parse back") {
  testing_support::Rng rng(3);
  auto u = xy();
  for (int n = 0; n < 10000; ++n) {
    auto s = AbstractState::from(u, {testing_support::random_interval(rng, -50, 50, true),
                                     testing_support::random_interval(rng, -50, 50, true)});
    CHECK(parse_state(to_string(s), u) == s);
    CHECK(parse_state(to_string(s, RenderStyle{true}), u) == s);
  }
}
