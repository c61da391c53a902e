#include <doctest.h>

#include "absint/llm/client.hpp"
#include "support/files.hpp"

#include <httplib.h>

#include <atomic>
#include <thread>

using namespace absint;
using nlohmann::json;

namespace {

// Counts calls and answers from a script; never touches a socket.
class StubTransport : public Transport {
 public:
  std::vector<HttpResponse> script;
  std::atomic<int> calls{0};
  std::vector<HttpRequest> seen;
  std::mutex mu;

  HttpResponse post(const HttpRequest& r) override {
    std::lock_guard lock(mu);
    int i = calls++;
    seen.push_back(r);
    if (script.empty()) throw TransportError("stub: connection refused");
    return script[std::min<std::size_t>(i, script.size() - 1)];
  }
};

std::string openai_body(const std::string& text, const std::string& finish = "stop") {
  return json{{"choices", {{{"message", {{"role", "assistant"}, {"content", text}}},
                            {"finish_reason", finish}}}},
              {"usage", {{"prompt_tokens", 11}, {"completion_tokens", 7}}}}
      .dump();
}

ModelConfig gpt() { return {"openai", "gpt-4o", 0.0, 512, std::chrono::seconds(5)}; }

EnvLookup with_key() {
  return [](const std::string& v) -> std::optional<std::string> {
    if (v == "OPENAI_API_KEY") return std::string("sk-test");
    return std::nullopt;
  };
}

std::filesystem::path scratch(const std::string& name) {
  auto d = std::filesystem::temp_directory_path() /
           ("absint-test-" + std::to_string(::getpid()));
  std::filesystem::create_directories(d);
  return d / name;
}

}  // namespace

TEST_CASE("model config validation") {
  CHECK_NOTHROW(gpt().validate());
  auto m = gpt();
  m.temperature = 2.5;
  CHECK_THROWS_AS(m.validate(), std::invalid_argument);
  m.temperature = -0.1;
  CHECK_THROWS_AS(m.validate(), std::invalid_argument);
  CHECK(ModelConfig{}.temperature == 0.0);
}

TEST_CASE("cassette digest is stable and covers every request field") {
  auto d = Cassette::digest(gpt(), "hello");
  CHECK(d.size() == 64);
  CHECK(Cassette::digest(gpt(), "hello") == d);
  auto m = gpt();
  m.temperature = 0.5;
  CHECK(Cassette::digest(m, "hello") != d);
  m = gpt();
  m.model = "gpt-4";
  CHECK(Cassette::digest(m, "hello") != d);
  CHECK(Cassette::digest(gpt(), "hello ") != d);
  // the separator keeps field boundaries apart
  ModelConfig a{"ab", "c"}, b{"a", "bc"};
  CHECK(Cassette::digest(a, "x") != Cassette::digest(b, "x"));
  // max tokens and timeout do not change the response identity
  m = gpt();
  m.max_output_tokens = 9;
  CHECK(Cassette::digest(m, "hello") == d);
}

TEST_CASE("replay performs no transport calls") {
  auto stub = std::make_shared<StubTransport>();
  auto cas = std::make_shared<Cassette>();
  cas->put(Cassette::digest(gpt(), "p1"), {"recorded answer", "stop", {3, 4}, "2024-01-01T00:00:00Z"});
  Client c(default_client_config(), Mode::replay, stub, cas);
  c.set_env([](const std::string&) { return std::nullopt; });
  auto r = c.complete(gpt(), "p1");
  CHECK(r.text == "recorded answer");
  CHECK(r.finish_reason == "stop");
  CHECK(r.tokens.completion == 4);
  CHECK_THROWS_AS(c.complete(gpt(), "p2"), CassetteMiss);
  CHECK(stub->calls == 0);
  // replay also works without any transport
  Client bare(default_client_config(), Mode::replay, nullptr, cas);
  CHECK(bare.complete(gpt(), "p1").text == "recorded answer");
}

TEST_CASE("credentials come from the environment only") {
  CHECK(credential_variable("openai") == "OPENAI_API_KEY");
  CHECK(credential_variable("my-llm") == "MY_LLM_API_KEY");
  auto stub = std::make_shared<StubTransport>();
  stub->script = {{200, openai_body("hi")}};
  auto cas = std::make_shared<Cassette>();
  Client c(default_client_config(), Mode::record, stub, cas);
  c.set_env([](const std::string&) { return std::nullopt; });
  CHECK_THROWS_AS(c.complete(gpt(), "p"), MissingCredentials);
  CHECK(stub->calls == 0);
  c.set_env(with_key());
  CHECK(c.complete(gpt(), "p").text == "hi");
  REQUIRE(stub->seen.size() == 1);
  bool auth = false;
  for (const auto& [k, v] : stub->seen[0].headers) auth |= k == "Authorization" && v == "Bearer sk-test";
  CHECK(auth);
  CHECK(cas->to_json().dump().find("sk-test") == std::string::npos);
}

TEST_CASE("retries with exponential backoff") {
  auto stub = std::make_shared<StubTransport>();
  stub->script = {{503, ""}, {429, ""}, {200, openai_body("ok")}};
  std::vector<long> sleeps;
  Client c(default_client_config(), Mode::live, stub, nullptr);
  c.set_env(with_key());
  c.set_sleeper([&](std::chrono::milliseconds d) { sleeps.push_back(d.count()); });
  CHECK(c.complete(gpt(), "p").text == "ok");
  CHECK(stub->calls == 3);
  CHECK(sleeps == std::vector<long>{1000, 2000});

  auto down = std::make_shared<StubTransport>();
  Client d(default_client_config(), Mode::live, down, nullptr);
  d.set_env(with_key());
  d.set_sleeper([](std::chrono::milliseconds) {});
  CHECK_THROWS_AS(d.complete(gpt(), "p"), TransportError);
  CHECK(down->calls == 3);

  auto denied = std::make_shared<StubTransport>();
  denied->script = {{401, "{}"}};
  Client e(default_client_config(), Mode::live, denied, nullptr);
  e.set_env(with_key());
  e.set_sleeper([](std::chrono::milliseconds) {});
  CHECK_THROWS_AS(e.complete(gpt(), "p"), TransportError);
  CHECK(denied->calls == 1);
}

TEST_CASE("truncation is reported, not raised") {
  auto stub = std::make_shared<StubTransport>();
  stub->script = {{200, openai_body("partial", "length")}};
  Client c(default_client_config(), Mode::live, stub, nullptr);
  c.set_env(with_key());
  auto r = c.complete(gpt(), "p");
  CHECK(r.truncated());
  CHECK(r.text == "partial");
}

TEST_CASE("provider response shapes") {
  auto a = parse_response("anthropic",
                          R"({"content":[{"type":"text","text":"a"},{"type":"text","text":"b"}],
                              "stop_reason":"max_tokens","usage":{"input_tokens":5,"output_tokens":6}})");
  CHECK(a.text == "ab");
  CHECK(a.finish_reason == "length");
  CHECK(a.tokens.prompt == 5);
  auto g = parse_response("gemini",
                          R"({"candidates":[{"content":{"parts":[{"text":"g"}]},"finishReason":"STOP"}]})");
  CHECK(g.text == "g");
  CHECK(g.finish_reason == "stop");
  CHECK_THROWS_AS(parse_response("openai", "not json"), TransportError);
  CHECK_THROWS_AS(parse_response("openai", "{}"), TransportError);

  auto cfg = default_client_config();
  auto m = gpt();
  m.model = "gemini-pro";
  auto req = make_request(cfg.providers.at("google"), m, "q", "k");
  CHECK(req.path == "/v1beta/models/gemini-pro:generateContent");
  auto body = json::parse(req.body);
  CHECK(body["contents"][0]["parts"][0]["text"] == "q");
  CHECK(body["generationConfig"]["temperature"] == 0.0);
}

TEST_CASE("config file") {
  auto p = scratch("providers.ini");
  {
    std::ofstream out(p);
    out << "[client]\nmax_in_flight = 2\nmax_attempts = 5\nbackoff_ms = 10\n\n"
           "[local]\nstyle = anthropic\nbase_url = http://127.0.0.1:9\npath = /v1/messages\n";
  }
  auto c = load_client_config(p);
  CHECK(c.max_in_flight == 2);
  CHECK(c.max_attempts == 5);
  CHECK(c.backoff.count() == 10);
  CHECK(c.providers.at("local").style == "anthropic");
  auto shipped = load_client_config(testing_support::source_dir() / "data" / "providers.ini");
  CHECK(shipped.providers.count("openai") == 1);
  {
    std::ofstream out(p);
    out << "[x]\nstyle = telnet\nbase_url = a\npath = b\n";
  }
  CHECK_THROWS(load_client_config(p));
}

TEST_CASE("at most K requests in flight per provider") {
  class Slow : public Transport {
   public:
    std::atomic<int> now{0}, peak{0};
    HttpResponse post(const HttpRequest&) override {
      int n = ++now;
      int p = peak.load();
      while (n > p && !peak.compare_exchange_weak(p, n)) {
      }
      std::this_thread::sleep_for(std::chrono::milliseconds(20));
      --now;
      return {200, openai_body("x")};
    }
  };
  auto slow = std::make_shared<Slow>();
  auto cfg = default_client_config();
  cfg.max_in_flight = 2;
  Client c(cfg, Mode::live, slow, nullptr);
  c.set_env(with_key());
  std::vector<std::thread> ts;
  for (int i = 0; i < 6; ++i) ts.emplace_back([&] { c.complete(gpt(), "p"); });
  for (auto& t : ts) t.join();
  CHECK(slow->peak <= 2);
  CHECK(slow->peak >= 1);
}

TEST_CASE("record against a local server, then replay the same bytes") {
  httplib::Server srv;
  std::atomic<int> hits{0};
  std::string seen_key;
  srv.Post("/v1/chat/completions", [&](const httplib::Request& req, httplib::Response& res) {
    ++hits;
    seen_key = req.get_header_value("Authorization");
    auto body = json::parse(req.body);
    std::string prompt = body["messages"][0]["content"];
    res.set_content(openai_body("echo: " + prompt + " ∇ ⊥"), "application/json");
  });
  int port = srv.bind_to_any_port("127.0.0.1");
  REQUIRE(port > 0);
  std::thread th([&] { srv.listen_after_bind(); });
  srv.wait_until_ready();

  auto cfg = default_client_config();
  cfg.providers["local"] = {"openai", "http://127.0.0.1:" + std::to_string(port),
                            "/v1/chat/completions"};
  ModelConfig m{"local", "stub-model", 0.0, 64, std::chrono::seconds(5)};
  auto path = scratch("cassette.json");
  std::filesystem::remove(path);

  std::string recorded;
  {
    auto cas = std::make_shared<Cassette>(Cassette::load(path));
    Client c(cfg, Mode::record, std::make_shared<HttpTransport>(), cas, path);
    c.set_env([](const std::string& v) -> std::optional<std::string> {
      if (v == "LOCAL_API_KEY") return std::string("secret-key");
      return std::nullopt;
    });
    recorded = c.complete(m, "what is P3?").text;
    CHECK(recorded == "echo: what is P3? ∇ ⊥");
    // a second record of the same request is served from the cassette
    CHECK(c.complete(m, "what is P3?").text == recorded);
    CHECK(hits == 1);
  }
  srv.stop();
  th.join();
  CHECK(seen_key == "Bearer secret-key");

  auto on_disk = testing_support::slurp(path);
  CHECK(on_disk.find("secret-key") == std::string::npos);
  CHECK(json::parse(on_disk)["v"] == 1);

  auto stub = std::make_shared<StubTransport>();
  auto cas = std::make_shared<Cassette>(Cassette::load(path));
  Client replay(cfg, Mode::replay, stub, cas);
  CHECK(replay.complete(m, "what is P3?").text == recorded);
  CHECK(stub->calls == 0);
  std::filesystem::remove(path);
}
