#include "absint/pipeline/pipeline.hpp"

#include "absint/cfront/c_subset.hpp"
#include "absint/imp/syntax.hpp"

#include <algorithm>
#include <atomic>
#include <fstream>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace absint {

namespace fs = std::filesystem;
using nlohmann::json;

void write_file(const fs::path& p, std::string_view text) {
  if (p.has_parent_path()) fs::create_directories(p.parent_path());
  std::ofstream out(p, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + p.string());
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out) throw std::runtime_error("cannot write " + p.string());
}

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + p.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

AnnotatedProgram load_program(const fs::path& file) {
  std::string text = read_file(file);
  if (file.extension() == ".c") return translate_c(text).program;
  return parse_imp(text);
}

namespace {

fs::path resolve(const fs::path& base, const std::string& p) {
  fs::path q(p);
  return q.is_absolute() ? q : base / q;
}

template <class T>
T field(const json& j, const char* key, const char* where) {
  if (!j.contains(key)) throw std::runtime_error(std::string(where) + ": missing \"" + key + "\"");
  try {
    return j.at(key).get<T>();
  } catch (const json::exception&) {
    throw std::runtime_error(std::string(where) + ": bad \"" + key + "\"");
  }
}

ModelConfig model_from_json(const json& j) {
  ModelConfig m;
  m.provider = field<std::string>(j, "provider", "model");
  m.model = field<std::string>(j, "model", "model");
  m.temperature = j.value("temperature", 0.0);
  m.max_output_tokens = j.value("max_output_tokens", std::size_t{8192});
  m.timeout = std::chrono::seconds(j.value("timeout_s", 300));
  m.validate();
  return m;
}

json model_to_json(const ModelConfig& m) {
  return {{"provider", m.provider},
          {"model", m.model},
          {"temperature", m.temperature},
          {"max_output_tokens", m.max_output_tokens},
          {"timeout_s", m.timeout.count()}};
}

std::string safe_name(std::string s) {
  for (char& c : s)
    if (c == '/' || c == '\\' || c == ':' || c == ' ') c = '_';
  return s;
}

// Refuses every request; replay must be answered from the cassette alone.
class OfflineTransport : public Transport {
 public:
  HttpResponse post(const HttpRequest& r) override {
    throw TransportError("network disabled in replay mode (" + r.base_url + ")");
  }
};

}  // namespace

std::vector<ProgramRef> load_corpus(const fs::path& manifest) {
  json j = json::parse(read_file(manifest));
  std::vector<ProgramRef> out;
  for (const auto& e : j.at("programs"))
    out.push_back({field<std::string>(e, "name", "corpus entry"),
                   resolve(manifest.parent_path(), field<std::string>(e, "file", "corpus entry"))});
  return out;
}

RunManifest load_manifest(const fs::path& file) {
  json j;
  try {
    j = json::parse(read_file(file));
  } catch (const json::parse_error& e) {
    throw std::runtime_error(file.string() + ": " + e.what());
  }
  fs::path base = file.parent_path();
  RunManifest m;
  if (j.contains("corpus")) {
    m.programs = load_corpus(resolve(base, field<std::string>(j, "corpus", "manifest")));
  }
  if (j.contains("programs")) {
    for (const auto& e : j.at("programs")) {
      if (e.is_string()) {
        fs::path p = resolve(base, e.get<std::string>());
        m.programs.push_back({p.stem().string(), p});
      } else {
        m.programs.push_back({field<std::string>(e, "name", "program"),
                              resolve(base, field<std::string>(e, "path", "program"))});
      }
    }
  }
  if (m.programs.empty()) throw std::runtime_error("manifest: no programs");
  if (j.contains("strategies")) {
    m.strategies.clear();
    for (const auto& s : j.at("strategies")) m.strategies.push_back(parse_strategy(s.get<std::string>()));
  }
  for (const auto& e : j.at("models")) m.models.push_back(model_from_json(e));
  if (m.models.empty()) throw std::runtime_error("manifest: no models");
  m.cassette = resolve(base, field<std::string>(j, "cassette", "manifest"));
  m.out = resolve(base, j.value("out", std::string("runs")));
  if (j.contains("client_config"))
    m.client_config = resolve(base, field<std::string>(j, "client_config", "manifest"));
  m.seed = j.value("seed", std::uint64_t{0});
  m.fuzz_runs = j.value("fuzz_runs", std::size_t{1000});
  m.max_loop_iterations = j.value("max_loop_iterations", std::size_t{10'000});
  m.workers = std::max<std::size_t>(1, j.value("workers", std::size_t{4}));
  return m;
}

json to_json(const RunManifest& m) {
  json progs = json::array();
  for (const auto& p : m.programs) progs.push_back({{"name", p.name}, {"path", p.path.string()}});
  json strategies = json::array();
  for (auto s : m.strategies) strategies.push_back(to_string(s));
  json models = json::array();
  for (const auto& x : m.models) models.push_back(model_to_json(x));
  json j{{"programs", progs},
         {"strategies", strategies},
         {"models", models},
         {"cassette", m.cassette.string()},
         {"seed", m.seed},
         {"fuzz_runs", m.fuzz_runs},
         {"max_loop_iterations", m.max_loop_iterations},
         {"workers", m.workers}};
  if (!m.client_config.empty()) j["client_config"] = m.client_config.string();
  return j;
}

std::vector<Unit> units(const RunManifest& m) {
  std::vector<Unit> out;
  for (const auto& p : m.programs)
    for (auto s : m.strategies)
      for (const auto& model : m.models) out.push_back({p, s, model});
  return out;
}

fs::path unit_dir(const fs::path& out, const Unit& u) {
  return out / safe_name(u.program.name) / to_string(u.strategy) /
         safe_name(u.model.provider + "-" + u.model.model);
}

Client make_client(const RunManifest& m, Mode mode) {
  ClientConfig cfg =
      m.client_config.empty() ? default_client_config() : load_client_config(m.client_config);
  std::shared_ptr<Transport> transport;
  if (mode == Mode::replay)
    transport = std::make_shared<OfflineTransport>();
  else
    transport = std::make_shared<HttpTransport>();
  auto cassette = std::make_shared<Cassette>(Cassette::load(m.cassette));
  std::optional<fs::path> path;
  if (mode == Mode::record) path = m.cassette;
  return Client(std::move(cfg), mode, std::move(transport), std::move(cassette), path);
}

QueryOutcome run_query(const RunManifest& m, Client& client) {
  const std::vector<Unit> all = units(m);
  std::atomic<std::size_t> next{0}, answered{0};
  std::mutex mu;
  std::vector<std::string> failures;

  auto work = [&] {
    for (std::size_t i; (i = next.fetch_add(1)) < all.size();) {
      const Unit& u = all[i];
      fs::path dir = unit_dir(m.out, u);
      try {
        AnnotatedProgram p = load_program(u.program.path);
        std::string prompt = build_prompt(u.strategy, p);
        write_file(dir / "prompt.txt", prompt);
        fs::remove(dir / "response.txt");
        Completion c = client.complete(u.model, prompt);
        json unit{{"program", u.program.name},
                  {"program_path", fs::weakly_canonical(u.program.path).string()},
                  {"strategy", to_string(u.strategy)},
                  {"model", model_to_json(u.model)},
                  {"digest", Cassette::digest(u.model, prompt)},
                  {"finish_reason", c.finish_reason},
                  {"tokens", {{"prompt", c.tokens.prompt}, {"completion", c.tokens.completion}}},
                  {"audit",
                   {{"seed", m.seed},
                    {"fuzz_runs", m.fuzz_runs},
                    {"max_loop_iterations", m.max_loop_iterations}}}};
        write_file(dir / "response.txt", c.text);
        write_file(dir / "unit.json", unit.dump(2) + "\n");
        ++answered;
      } catch (const std::exception& e) {
        std::scoped_lock lock(mu);
        failures.push_back(dir.string() + ": " + e.what());
      }
    }
  };

  std::size_t n = std::min(m.workers, all.size());
  {
    std::vector<std::jthread> pool;
    for (std::size_t t = 1; t < n; ++t) pool.emplace_back(work);
    work();
  }
  std::sort(failures.begin(), failures.end());
  return {answered.load(), std::move(failures)};
}

AuditReport audit_unit(const fs::path& dir, const std::optional<FuzzConfig>& fuzz) {
  json unit = json::parse(read_file(dir / "unit.json"));
  AnnotatedProgram p = load_program(field<std::string>(unit, "program_path", "unit.json"));
  Strategy s = parse_strategy(field<std::string>(unit, "strategy", "unit.json"));
  std::string response = read_file(dir / "response.txt");

  AuditOptions opt;
  opt.finish_reason = unit.value("finish_reason", std::string("stop"));
  if (fuzz) {
    opt.fuzz = *fuzz;
  } else if (unit.contains("audit")) {
    const json& a = unit.at("audit");
    opt.fuzz.seed = a.value("seed", std::uint64_t{0});
    opt.fuzz.runs = a.value("fuzz_runs", std::size_t{1000});
    opt.fuzz.max_loop_iterations = a.value("max_loop_iterations", std::size_t{10'000});
  }

  AuditReport r = audit(p, s, response, opt);
  json j = to_json(r, p);
  j["unit"] = {{"program", unit.at("program")},
               {"strategy", unit.at("strategy")},
               {"provider", unit.at("model").at("provider")},
               {"model", unit.at("model").at("model")},
               {"finish_reason", opt.finish_reason}};
  write_file(dir / "report.json", j.dump(2) + "\n");
  write_file(dir / "report.txt", render_report(r));
  return r;
}

namespace {

std::vector<fs::path> files_named(const fs::path& root, const std::string& name) {
  std::vector<fs::path> out;
  if (!fs::exists(root)) return out;
  for (const auto& e : fs::recursive_directory_iterator(root))
    if (e.is_regular_file() && e.path().filename() == name) out.push_back(e.path());
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

std::size_t audit_tree(const fs::path& root, const std::optional<FuzzConfig>& fuzz) {
  std::size_t n = 0;
  for (const auto& u : files_named(root, "unit.json")) {
    if (!fs::exists(u.parent_path() / "response.txt")) continue;
    audit_unit(u.parent_path(), fuzz);
    ++n;
  }
  return n;
}

ScoreTable collect_scores(const fs::path& root) {
  ScoreTable t;
  for (const auto& f : files_named(root, "report.json")) {
    json j = json::parse(read_file(f));
    const json& u = j.at("unit");
    std::string program = u.at("program").get<std::string>();
    std::string model = u.at("provider").get<std::string>() + "/" + u.at("model").get<std::string>();
    if (std::find(t.programs.begin(), t.programs.end(), program) == t.programs.end())
      t.programs.push_back(program);
    if (std::find(t.models.begin(), t.models.end(), model) == t.models.end())
      t.models.push_back(model);
    auto& cell = t.cells[{program, model}];
    const json& sc = j.at("scores");
    if (u.at("strategy") == "compositional") {
      cell[0] = sc.at("im_sound").get<std::string>();
    } else {
      cell[1] = sc.at("im_sound").get<std::string>();
      cell[2] = sc.at("fpe_correct").is_string() ? sc.at("fpe_correct").get<std::string>() : "-";
    }
  }
  return t;
}

std::string render_scores(const ScoreTable& t) {
  static const char* kCols[] = {"comp IM", "trans IM", "FPE"};
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> head{"program"};
  for (std::size_t i = 0; i < t.models.size(); ++i) head.insert(head.end(), kCols, kCols + 3);
  rows.push_back(head);
  for (const auto& p : t.programs) {
    std::vector<std::string> row{p};
    for (const auto& m : t.models) {
      auto it = t.cells.find({p, m});
      for (std::size_t k = 0; k < 3; ++k) {
        std::string v = it == t.cells.end() ? "" : it->second[k];
        row.push_back(v.empty() ? "." : v);
      }
    }
    rows.push_back(row);
  }
  std::vector<std::size_t> width(head.size(), 0);
  for (const auto& r : rows)
    for (std::size_t c = 0; c < r.size(); ++c) width[c] = std::max(width[c], r[c].size());
  // Each model's three columns together are at least as wide as its name.
  for (std::size_t i = 0; i < t.models.size(); ++i) {
    std::size_t c = 1 + 3 * i, span = width[c] + width[c + 1] + width[c + 2] + 4;
    if (span < t.models[i].size()) width[c + 2] += t.models[i].size() - span;
  }

  auto pad = [](std::string v, std::size_t w) {
    v.resize(std::max(w, v.size()), ' ');
    return v;
  };
  auto emit = [](std::ostringstream& out, std::string line) {
    while (!line.empty() && line.back() == ' ') line.pop_back();
    out << line << '\n';
  };
  std::ostringstream out;
  std::string top = pad("", width[0]);
  for (std::size_t i = 0; i < t.models.size(); ++i) {
    std::size_t c = 1 + 3 * i;
    top += " | " + pad(t.models[i], width[c] + width[c + 1] + width[c + 2] + 4);
  }
  emit(out, top);
  for (const auto& r : rows) {
    std::string line = pad(r[0], width[0]);
    for (std::size_t c = 1; c < r.size(); ++c) line += (c % 3 == 1 ? " | " : "  ") + pad(r[c], width[c]);
    emit(out, line);
  }
  return out.str();
}

json to_json(const ScoreTable& t) {
  json rows = json::array();
  for (const auto& p : t.programs) {
    json row{{"program", p}};
    for (const auto& m : t.models) {
      auto it = t.cells.find({p, m});
      if (it == t.cells.end()) continue;
      row[m] = {{"compositional_im", it->second[0]},
                {"transitional_im", it->second[1]},
                {"fpe", it->second[2]}};
    }
    rows.push_back(row);
  }
  return {{"models", t.models}, {"rows", rows}};
}

}  // namespace absint
