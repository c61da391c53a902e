#include <doctest.h>

#include "absint/pipeline/pipeline.hpp"
#include "support/files.hpp"

#include <atomic>
#include <cstdio>
#include <unistd.h>

using namespace absint;
namespace fs = std::filesystem;
using testing_support::slurp;
using testing_support::source_dir;

namespace {

fs::path demo_manifest() { return source_dir() / "fixtures/query/demo.json"; }

class CountingTransport : public Transport {
 public:
  std::atomic<int> calls{0};
  HttpResponse post(const HttpRequest&) override {
    ++calls;
    return {500, ""};
  }
};

struct TempDir {
  fs::path path;
  explicit TempDir(const std::string& tag) {
    static std::atomic<int> n{0};
    path = fs::temp_directory_path() /
           ("absint-" + tag + "-" + std::to_string(::getpid()) + "-" + std::to_string(n++));
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path, ec);
  }
};

// relative path -> bytes, for every file below root
std::map<std::string, std::string> snapshot(const fs::path& root) {
  std::map<std::string, std::string> out;
  for (const auto& e : fs::recursive_directory_iterator(root))
    if (e.is_regular_file()) out[fs::relative(e.path(), root).string()] = slurp(e.path());
  return out;
}

std::string run_cli(const std::string& args, int* status = nullptr) {
  std::string cmd = std::string(ABSINT_CLI_PATH) + " " + args + " 2>&1";
  FILE* f = ::popen(cmd.c_str(), "r");
  REQUIRE(f);
  std::string out;
  char buf[4096];
  while (std::size_t n = std::fread(buf, 1, sizeof buf, f)) out.append(buf, n);
  int st = ::pclose(f);
  if (status) *status = WEXITSTATUS(st);
  return out;
}

}  // namespace

TEST_CASE("run manifest") {
  RunManifest m = load_manifest(demo_manifest());
  CHECK(m.programs.size() == 6);
  CHECK(m.programs[0].name == "running");
  CHECK(fs::exists(m.programs[4].path));
  CHECK(m.models.size() == 3);
  CHECK(m.strategies.size() == 2);
  CHECK(m.seed == 7);
  CHECK(units(m).size() == 36);
  CHECK(unit_dir("out", units(m)[0]) == fs::path("out/running/compositional/fixture-reference"));

  TempDir t("manifest");
  write_file(t.path / "bad.json", R"({"programs": [], "models": [], "cassette": "c.json"})");
  CHECK_THROWS_WITH(load_manifest(t.path / "bad.json"), "manifest: no programs");
  write_file(t.path / "bad2.json", R"({"programs": ["x.imp"], "models": [{"provider": "p"}]})");
  CHECK_THROWS_WITH(load_manifest(t.path / "bad2.json"), "model: missing \"model\"");
}

TEST_CASE("corpus listing") {
  auto c = load_corpus(source_dir() / "data/corpus/manifest.json");
  CHECK(c.size() == 22);
  for (const auto& e : c) CHECK(fs::exists(e.path));
}

TEST_CASE("replay answers every unit from the cassette without the network") {
  RunManifest m = load_manifest(demo_manifest());
  TempDir t("replay");
  m.out = t.path;
  auto transport = std::make_shared<CountingTransport>();
  auto cassette = std::make_shared<Cassette>(Cassette::load(m.cassette));
  Client client(default_client_config(), Mode::replay, transport, cassette);
  auto q = run_query(m, client);
  CHECK(q.answered == 36);
  CHECK(q.failures.empty());
  CHECK(transport->calls == 0);
  for (const auto& u : units(m)) {
    CHECK(fs::exists(unit_dir(m.out, u) / "response.txt"));
    CHECK(fs::exists(unit_dir(m.out, u) / "unit.json"));
  }

  SUBCASE("a request missing from the cassette fails that unit only") {
    m.models[0].temperature = 0.5;
    auto r = run_query(m, client);
    CHECK(r.answered == 24);
    CHECK(r.failures.size() == 12);
    CHECK(r.failures[0].find("no recorded response") != std::string::npos);
    CHECK(transport->calls == 0);
  }
}

TEST_CASE("query, audit and score are deterministic") {
  RunManifest m = load_manifest(demo_manifest());
  m.fuzz_runs = 300;
  std::vector<std::map<std::string, std::string>> snaps;
  std::vector<std::string> tables;
  for (int k = 0; k < 2; ++k) {
    TempDir t("det");
    m.out = t.path;
    m.workers = k == 0 ? 1 : 4;
    Client client = make_client(m, Mode::replay);
    REQUIRE(run_query(m, client).failures.empty());
    CHECK(audit_tree(m.out) == 36);
    tables.push_back(render_scores(collect_scores(m.out)));
    snaps.push_back(snapshot(m.out));
  }
  CHECK(snaps[0] == snaps[1]);
  CHECK(tables[0] == tables[1]);
  CHECK(tables[0].find("fixture/reference") != std::string::npos);
}

TEST_CASE("score table") {
  RunManifest m = load_manifest(demo_manifest());
  TempDir t("score");
  m.out = t.path;
  m.fuzz_runs = 200;
  Client client = make_client(m, Mode::replay);
  REQUIRE(run_query(m, client).failures.empty());
  audit_tree(m.out);
  ScoreTable s = collect_scores(m.out);
  CHECK(s.models == std::vector<std::string>{"fixture/flawed", "fixture/reference", "fixture/truncated"});
  CHECK(s.programs.size() == 6);
  using Cells = std::array<std::string, 3>;
  CHECK(s.cells.at({"example2", "fixture/reference"}) == Cells{"7/7", "7/7", "7/7"});
  CHECK(s.cells.at({"gauss_sum", "fixture/reference"}) == Cells{"14/14", "14/14", "14/14"});
  // Cut off halfway: no answer block, but the equations came first.
  CHECK(s.cells.at({"example2", "fixture/truncated"}) == Cells{"-", "-", "7/7"});
  // The flawed model's transitional answer joins the wrong loop location.
  CHECK(s.cells.at({"example2", "fixture/flawed"})[2] == "6/7");

  auto j = to_json(s);
  CHECK(j.at("rows").size() == 6);
  std::string table = render_scores(s);
  CHECK(table.find("comp IM") != std::string::npos);
  CHECK(table.find("example2  | 7/7") != std::string::npos);
}

TEST_CASE("cli") {
  int st = 0;
  auto map = run_cli((source_dir() / "fixtures/programs/example2.imp").string() + " ", &st);
  CHECK(st != 0);  // no subcommand

  map = run_cli("analyze " + (source_dir() / "fixtures/programs/example2.imp").string(), &st);
  CHECK(st == 0);
  CHECK(map == slurp(source_dir() / "fixtures/golden/example2.compositional.map"));

  auto imp = run_cli("annotate " + (source_dir() / "data/corpus/even.c").string(), &st);
  CHECK(st == 0);
  CHECK(imp.rfind("{P0}", 0) == 0);

  auto report = run_cli("audit " + (source_dir() / "fixtures/responses/example2.compositional.txt").string() +
                            " -p " + (source_dir() / "fixtures/programs/example2.imp").string() +
                            " --fuzz-runs 100",
                        &st);
  CHECK(st == 0);
  CHECK(report.find("invariant map soundness: 6/7") != std::string::npos);

  run_cli("analyze /nonexistent.imp", &st);
  CHECK(st != 0);
}
