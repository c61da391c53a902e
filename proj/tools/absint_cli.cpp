#include "absint/analysis/compositional.hpp"
#include "absint/analysis/transitional.hpp"
#include "absint/audit/audit.hpp"
#include "absint/cfront/c_subset.hpp"
#include "absint/imp/syntax.hpp"
#include "absint/pipeline/pipeline.hpp"
#include "absint/prompt/prompt.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <iostream>
#include <optional>
#include <set>
#include <string>

namespace fs = std::filesystem;
using namespace absint;

namespace {

Strategy strategy_of(const std::string& s) { return parse_strategy(s); }

int cmd_annotate(const std::string& file) {
  AnnotatedProgram p = load_program(file);
  std::cout << render(p);
  return 0;
}

int cmd_translate(const std::string& file) {
  CTranslation t = translate_c(read_file(file));
  for (const auto& d : t.diagnostics) std::cerr << "note: " << d << '\n';
  std::cout << render(t.program);
  return 0;
}

int cmd_analyze(const std::string& file, const std::string& strategy, const std::string& order,
                const std::string& out, bool unicode) {
  AnnotatedProgram p = load_program(file);
  RenderStyle rs{unicode};
  std::string map_text, narration;
  nlohmann::json trace;
  if (strategy_of(strategy) == Strategy::compositional) {
    CompositionalResult r = run_compositional(p);
    map_text = to_string(r.map, MapStyle::arrow, rs);
    narration = narrate(p, r);
    trace = to_json(r);
  } else {
    TransitionalOptions opt;
    opt.order = parse_worklist_order(order);
    TransitionalResult r = run_transitional(p, opt);
    map_text = to_string(r.map, MapStyle::arrow, rs);
    narration = narrate(r);
    trace = to_json(r);
  }
  std::cout << map_text;
  if (!map_text.empty() && map_text.back() != '\n') std::cout << '\n';
  if (!out.empty()) {
    write_file(fs::path(out) / "map.txt", map_text);
    write_file(fs::path(out) / "narration.txt", narration);
    write_file(fs::path(out) / "trace.json", trace.dump(2) + "\n");
  }
  return 0;
}

int cmd_prompt(const std::string& file, const std::string& strategy, bool ascii) {
  AnnotatedProgram p = load_program(file);
  std::cout << build_prompt(strategy_of(strategy), p, ascii ? Charset::ascii : Charset::utf8);
  return 0;
}

int cmd_query(const std::string& manifest, const std::string& mode, const std::string& out,
              const std::string& config) {
  RunManifest m = load_manifest(manifest);
  if (!out.empty()) m.out = out;
  if (!config.empty()) m.client_config = config;
  Client client = make_client(m, parse_mode(mode));
  QueryOutcome q = run_query(m, client);
  write_file(m.out / "manifest.json", to_json(m).dump(2) + "\n");
  std::cout << q.answered << " of " << units(m).size() << " units answered\n";
  for (const auto& f : q.failures) std::cerr << "error: " << f << '\n';
  return q.failures.empty() ? 0 : 1;
}

int cmd_audit(const std::string& response, const std::string& program, const std::string& strategy,
              const std::string& dir, std::optional<std::uint64_t> seed,
              std::optional<std::size_t> runs, std::optional<std::size_t> max_iter,
              const std::string& finish_reason, const std::string& out) {
  std::optional<FuzzConfig> fuzz;
  if (seed || runs || max_iter) {
    fuzz = FuzzConfig{};
    fuzz->max_loop_iterations = 10'000;
    if (seed) fuzz->seed = *seed;
    if (runs) fuzz->runs = *runs;
    if (max_iter) fuzz->max_loop_iterations = *max_iter;
  }
  if (!dir.empty()) {
    std::size_t n = audit_tree(dir, fuzz);
    std::cout << n << " units audited\n";
    return 0;
  }
  if (response.empty() || program.empty())
    throw CLI::ValidationError("audit", "give RESPONSE and --program, or --dir");
  AnnotatedProgram p = load_program(program);
  AuditOptions opt;
  opt.fuzz.max_loop_iterations = 10'000;
  if (fuzz) opt.fuzz = *fuzz;
  opt.finish_reason = finish_reason;
  AuditReport r = audit(p, strategy_of(strategy), read_file(response), opt);
  std::cout << render_report(r);
  if (!out.empty()) write_file(out, to_json(r, p).dump(2) + "\n");
  return 0;
}

int cmd_score(const std::string& dir, bool json) {
  ScoreTable t = collect_scores(dir);
  if (json)
    std::cout << to_json(t).dump(2) << '\n';
  else
    std::cout << render_scores(t);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Interval abstract interpretation of IMP programs and audits of model-written analyses"};
  app.require_subcommand(1);

  std::string file, strategy = "compositional", order = "lowest", out, manifest, mode = "replay",
                    config, response, program, dir, finish_reason = "stop";
  bool ascii = false, unicode = false, json = false;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> runs, max_iter;
  const std::set<std::string> strategies{"compositional", "transitional"};

  auto* annotate = app.add_subcommand("annotate", "Print a program with its location labels");
  annotate->add_option("file", file, "IMP (.imp) or C (.c) program")->required()->check(CLI::ExistingFile);

  auto* translate = app.add_subcommand("translate", "Translate a C file to IMP");
  translate->add_option("file", file)->required()->check(CLI::ExistingFile);

  auto* analyze = app.add_subcommand("analyze", "Compute the reference invariant map");
  analyze->add_option("file", file)->required()->check(CLI::ExistingFile);
  analyze->add_option("-s,--strategy", strategy)->check(CLI::IsMember(strategies));
  analyze->add_option("--order", order, "worklist order: lowest, fifo, lifo")
      ->check(CLI::IsMember({"lowest", "fifo", "lifo"}));
  analyze->add_option("-o,--out", out, "directory for map, narration and trace");
  analyze->add_flag("--unicode", unicode, "print bot and inf as symbols");

  auto* prompt = app.add_subcommand("prompt", "Build the prompt for a program");
  prompt->add_option("file", file)->required()->check(CLI::ExistingFile);
  prompt->add_option("-s,--strategy", strategy)->check(CLI::IsMember(strategies));
  prompt->add_flag("--ascii", ascii);

  auto* query = app.add_subcommand("query", "Ask models for every unit of a run manifest");
  query->add_option("manifest", manifest)->required()->check(CLI::ExistingFile);
  query->add_option("--mode", mode)->check(CLI::IsMember({"live", "record", "replay"}));
  query->add_option("-o,--out", out, "overrides the manifest's out directory");
  query->add_option("--config", config, "provider INI file");

  auto* audit_cmd = app.add_subcommand("audit", "Audit a model response against the reference");
  audit_cmd->add_option("response", response)->check(CLI::ExistingFile);
  audit_cmd->add_option("-p,--program", program)->check(CLI::ExistingFile);
  audit_cmd->add_option("-s,--strategy", strategy)->check(CLI::IsMember(strategies));
  audit_cmd->add_option("--dir", dir, "audit every unit below a query output directory")
      ->check(CLI::ExistingDirectory);
  audit_cmd->add_option("--seed", seed);
  audit_cmd->add_option("--fuzz-runs", runs);
  audit_cmd->add_option("--max-loop-iterations", max_iter);
  audit_cmd->add_option("--finish-reason", finish_reason);
  audit_cmd->add_option("-o,--out", out, "write the JSON report here");

  auto* score = app.add_subcommand("score", "Tabulate the audit reports below a directory");
  score->add_option("dir", dir)->required()->check(CLI::ExistingDirectory);
  score->add_flag("--json", json);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*annotate) return cmd_annotate(file);
    if (*translate) return cmd_translate(file);
    if (*analyze) return cmd_analyze(file, strategy, order, out, unicode);
    if (*prompt) return cmd_prompt(file, strategy, ascii);
    if (*query) return cmd_query(manifest, mode, out, config);
    if (*audit_cmd)
      return cmd_audit(response, program, strategy, dir, seed, runs, max_iter, finish_reason, out);
    if (*score) return cmd_score(dir, json);
  } catch (const CLI::Error& e) {
    return app.exit(e);
  } catch (const std::exception& e) {
    std::cerr << "absint: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
