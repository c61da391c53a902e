#include <doctest.h>

#include "absint/analysis/compositional.hpp"
#include "absint/analysis/transitional.hpp"
#include "absint/audit/fuzz.hpp"
#include "absint/cfront/c_subset.hpp"
#include "absint/imp/syntax.hpp"
#include "support/files.hpp"

#include <json.hpp>

#include <map>

using namespace absint;
using testing_support::fixture;
using testing_support::slurp;
using testing_support::source_dir;

namespace {

std::string imp_of(std::string_view c) { return render(translate_c(c).program); }

struct Entry {
  std::string name;
  std::string file;
  std::size_t locations;
};

std::vector<Entry> corpus() {
  auto j = nlohmann::json::parse(slurp(source_dir() / "data/corpus/manifest.json"));
  std::vector<Entry> out;
  for (const auto& e : j.at("programs"))
    out.push_back({e.at("name"), e.at("file"), e.at("locations")});
  return out;
}

std::string corpus_text(const Entry& e) { return slurp(source_dir() / "data/corpus" / e.file); }

// (assignment ordinal, store after it) from the IMP side: the location after
// the k-th Assign is recorded exactly when that assignment completes.
std::map<std::size_t, std::size_t> assign_ordinals(const AnnotatedProgram& p) {
  std::map<std::size_t, std::size_t> ordinal_at;
  std::size_t k = 0;
  for (const Cmd* c : p.statements())
    if (std::holds_alternative<Cmd::Assign>(c->node)) ordinal_at[p.placement(*c).after.index] = k++;
  return ordinal_at;
}

std::vector<std::pair<std::size_t, Store>> imp_assignments(
    const ConcreteProgram& cp, const std::map<std::size_t, std::size_t>& ordinal_at,
    InputSource& in, std::size_t cap, RunEnd* end) {
  std::vector<std::pair<std::size_t, Store>> out;
  auto r = execute(cp, in, {cap, false}, [&](std::size_t l, const Store& s) {
    if (auto it = ordinal_at.find(l); it != ordinal_at.end()) out.emplace_back(it->second, s);
  });
  *end = r.end;
  return out;
}

}  // namespace

TEST_CASE("the running example from C") {
  const char* c = R"(
    extern int __VERIFIER_nondet_int(void);
    int main() {
      int a = __VERIFIER_nondet_int();
      if (a > 6) {
        a = 0;
      }
      while (a < 6) {
        a = a + 1;
      }
      return 0;
    }
  )";
  auto t = translate_c(c);
  CHECK(t.program == parse_imp(fixture("programs/running.imp")));
  CHECK(t.program.location_count() == 10);
  CHECK(t.diagnostics.empty());
}

TEST_CASE("small translations") {
  CHECK(imp_of("int main() { int x; x = 1; }") == "{P0}\nx := 1;\n{P1}");
  CHECK(imp_of("int main(void) { int x = 2; x += 3; x--; }") ==
        "{P0}\nx := 2;\n{P1}\nx := x + 3;\n{P2}\nx := x - 1;\n{P3}");

  SUBCASE("for loops become init; while (cond) { body; step }") {
    auto got = translate_c("int main() { int i, s = 0; for (i = 0; i < 10; i++) s = s + i; }").program;
    auto want = parse_imp(
        "s := 0; i := 0; while (i < 10) do s := s + i; i := i + 1; end");
    CHECK(got == want);
    auto forever = translate_c("int main() { int i; for (;;) i = i + 1; }").program;
    CHECK(forever == parse_imp("while (true) do i := i + 1; end"));
  }
  SUBCASE("conditions") {
    CHECK(translate_c("int main() { int x; if (x != 0) x = 1; }").program ==
          parse_imp("if (!(x == 0)) then x := 1; else skip; end"));
    CHECK(translate_c("int main() { int x; while (x) x = x - 1; }").program ==
          parse_imp("while (!(x == 0)) do x := x - 1; end"));
    CHECK(translate_c("int main() { int x; while (1) x = -x; }").program ==
          parse_imp("while (true) do x := 0 - x; end"));
    CHECK(translate_c("int main() { int x = -5; }").program == parse_imp("x := -5;"));
  }
  SUBCASE("dropped calls and empty blocks") {
    auto t = translate_c(
        "int main() { int x = __VERIFIER_nondet_int(); if (x > 0) { __VERIFIER_assert(x > 0); } }");
    CHECK(t.program == parse_imp("x := read(); if (x > 0) then skip; else skip; end"));
    CHECK(t.diagnostics.size() == 1);
  }
  SUBCASE("#define constants") {
    CHECK(translate_c("#define N 10\nint main() { int x = N; }").program == parse_imp("x := 10;"));
  }
  SUBCASE("declared but unused variables stay in the universe") {
    auto t = translate_c("int main() { int x, y; x = 1; }");
    CHECK(t.program.variables() == Universe{"x", "y"});
  }
}

TEST_CASE("constructs outside the subset are rejected with a line number") {
  struct Case {
    const char* text;
    const char* construct;
  };
  for (const auto& [text, construct] : std::vector<Case>{
           {"int main() {\n int x;\n x = x % 2;\n}", "%"},
           {"int main() { int a[3]; }", "array"},
           {"int main() { int *p; }", "pointer"},
           {"int main() { unsigned int x; }", "unsigned"},
           {"int main() { int x; do { x = 1; } while (x); }", "do"},
           {"int main() { int x; while (1) { break; } }", "break"},
           {"int main() { int x; x = x > 0 ? 1 : 2; }", "conditional"},
           {"int f(int y) { return y; }\nint main() { int x; }", "function"},
           {"#define SQ(a) a * a\nint main() { int x; x = SQ(2); }", "macro"},
       }) {
    CAPTURE(text);
    try {
      translate_c(text);
      FAIL("accepted");
    } catch (const CSubsetError& e) {
      CHECK(std::string(e.what()).find(construct) != std::string::npos);
      CHECK(e.line() >= 1);
    }
  }
  try {
    translate_c("int main() {\n int x;\n x = x % 2;\n}");
  } catch (const CSubsetError& e) {
    CHECK(e.line() == 3);
    CHECK(std::string(e.what()).rfind("line 3:", 0) == 0);
  }
}

TEST_CASE("corpus: every file translates and both analyses are total") {
  auto all = corpus();
  CHECK(all.size() == 22);
  for (const auto& e : all) {
    CAPTURE(e.name);
    auto t = translate_c(corpus_text(e));
    CHECK(t.program.location_count() == e.locations);
    CHECK(expected_location_count(*t.program.root()) == e.locations);
    // Rendering and re-parsing gives the same program.
    CHECK(parse_imp(render(t.program)) == t.program);
    auto comp = run_compositional(t.program);
    auto trans = run_transitional(t.program);
    CHECK(comp.map.complete());
    CHECK(trans.map.complete());
  }
}

// The translation is checked by running both sides on the same inputs: every
// executed assignment must leave the same store in C and in IMP.
TEST_CASE("corpus: paired C and IMP executions agree") {
  const std::size_t runs = 1000, cap = 1000;
  for (const auto& e : corpus()) {
    CAPTURE(e.name);
    CProgram c = parse_c(corpus_text(e));
    CTranslation t = translate_c(c);
    ConcreteProgram cp(t.program);
    auto ordinals = assign_ordinals(t.program);
    std::size_t mismatches = 0;
    for (std::size_t run = 0; run < runs; ++run) {
      SampledInputs a(run_seed(1, run), cp.constants()), b(run_seed(1, run), cp.constants());
      RunEnd imp_end;
      auto imp = imp_assignments(cp, ordinals, a, cap, &imp_end);
      CRunResult cr = run_c(c, t, b, cap);
      if (imp_end == RunEnd::cycle) {
        // The IMP runner stops at a repeated state; C keeps going to the cap.
        bool prefix = cr.assignments.size() >= imp.size() &&
                      std::equal(imp.begin(), imp.end(), cr.assignments.begin());
        mismatches += !prefix;
        continue;
      }
      bool same = imp_end == cr.end && imp == cr.assignments;
      if (!same && mismatches == 0) {
        CAPTURE(run);
        CHECK(to_string(imp_end) == to_string(cr.end));
        CHECK(imp.size() == cr.assignments.size());
      }
      mismatches += !same;
    }
    CHECK(mismatches == 0);
  }
}
