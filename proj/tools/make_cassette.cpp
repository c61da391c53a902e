// Builds the replay cassette for a run manifest without any network: model
// "reference" answers with the analyzer's own narration, "flawed" with the
// first seeded-error variant of it, "truncated" with the first half of the
// narration cut off at the output limit.
#include "absint/analysis/compositional.hpp"
#include "absint/analysis/transitional.hpp"
#include "absint/audit/mutate.hpp"
#include "absint/pipeline/pipeline.hpp"

#include <CLI11.hpp>

#include <iostream>

using namespace absint;

namespace {

std::string narration(const AnnotatedProgram& p, Strategy s) {
  if (s == Strategy::compositional) return narrate(p, run_compositional(p));
  return narrate(run_transitional(p));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Write a fixture cassette for a run manifest"};
  std::string manifest;
  app.add_option("manifest", manifest)->required()->check(CLI::ExistingFile);
  CLI11_PARSE(app, argc, argv);

  try {
    RunManifest m = load_manifest(manifest);
    Cassette c;
    for (const Unit& u : units(m)) {
      AnnotatedProgram p = load_program(u.program.path);
      std::string prompt = build_prompt(u.strategy, p);
      CassetteEntry e;
      e.finish_reason = "stop";
      e.timestamp = "2026-01-01T00:00:00Z";
      e.response_text = narration(p, u.strategy);
      if (u.model.model == "flawed") {
        for (const auto& mu : mutants(p))
          if (mu.strategy == u.strategy) {
            e.response_text = mu.text;
            break;
          }
      } else if (u.model.model == "truncated") {
        std::string& t = e.response_text;
        t.resize(t.size() / 2);
        e.finish_reason = "length";
      }
      e.tokens = {prompt.size() / 4, e.response_text.size() / 4};
      c.put(Cassette::digest(u.model, prompt), std::move(e));
    }
    c.save(m.cassette);
    std::cout << c.size() << " entries written to " << m.cassette.string() << '\n';
  } catch (const std::exception& e) {
    std::cerr << "make_cassette: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
