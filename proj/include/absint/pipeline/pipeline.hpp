#pragma once

#include "absint/audit/audit.hpp"
#include "absint/llm/client.hpp"
#include "absint/prompt/prompt.hpp"

#include <json.hpp>

#include <array>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace absint {

// .c files go through the C frontend, everything else is read as IMP.
AnnotatedProgram load_program(const std::filesystem::path& file);

struct ProgramRef {
  std::string name;
  std::filesystem::path path;
};

// One experiment: programs x strategies x models, answered through a
// cassette, audited with one seed. Relative paths in the JSON form are
// resolved against the manifest's directory.
struct RunManifest {
  std::vector<ProgramRef> programs;
  std::vector<Strategy> strategies{Strategy::compositional, Strategy::transitional};
  std::vector<ModelConfig> models;
  std::filesystem::path cassette;
  std::filesystem::path out;
  std::filesystem::path client_config;  // empty: built-in provider table
  std::uint64_t seed = 0;
  std::size_t fuzz_runs = 1000;
  std::size_t max_loop_iterations = 10'000;
  std::size_t workers = 4;
};

// Throws std::runtime_error naming the offending field.
RunManifest load_manifest(const std::filesystem::path& file);
nlohmann::json to_json(const RunManifest& m);

// Corpus listing {"programs": [{"name", "file", "locations"}]}.
std::vector<ProgramRef> load_corpus(const std::filesystem::path& manifest);

struct Unit {
  ProgramRef program;
  Strategy strategy;
  ModelConfig model;
};

std::vector<Unit> units(const RunManifest& m);
// <out>/<program>/<strategy>/<provider>-<model>
std::filesystem::path unit_dir(const std::filesystem::path& out, const Unit& u);

struct QueryOutcome {
  std::size_t answered = 0;
  std::vector<std::string> failures;  // "<unit dir>: <error>", sorted
};

// Writes prompt.txt, response.txt and unit.json for every unit. Units run on
// a pool of m.workers threads; the client bounds requests per provider. A
// failed unit is reported and leaves no response behind.
QueryOutcome run_query(const RunManifest& m, Client& client);

// A Client for m in the given mode. replay gets a transport that refuses
// every request, so it never touches the network.
Client make_client(const RunManifest& m, Mode mode);

// Audits one unit directory (needs unit.json and response.txt) and writes
// report.json and report.txt. The fuzz settings recorded in unit.json are
// used unless fuzz is given.
AuditReport audit_unit(const std::filesystem::path& dir,
                       const std::optional<FuzzConfig>& fuzz = std::nullopt);

// Audits every unit directory below root, in sorted order. Returns how many.
std::size_t audit_tree(const std::filesystem::path& root,
                       const std::optional<FuzzConfig>& fuzz = std::nullopt);

// Table of "x/y" / "-" cells from every report.json below root: one row per
// program, per model the compositional and transitional map soundness and
// the equation correctness.
struct ScoreTable {
  std::vector<std::string> models;
  std::vector<std::string> programs;
  // (program, model) -> {compositional IM, transitional IM, FPE}
  std::map<std::pair<std::string, std::string>, std::array<std::string, 3>> cells;
};
ScoreTable collect_scores(const std::filesystem::path& root);
std::string render_scores(const ScoreTable& t);
nlohmann::json to_json(const ScoreTable& t);

void write_file(const std::filesystem::path& p, std::string_view text);
std::string read_file(const std::filesystem::path& p);

}  // namespace absint
