#include "absint/llm/client.hpp"

#include "absint/util/sha256.hpp"

#include <httplib.h>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <charconv>
#include <cctype>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <sstream>
#include <thread>

namespace absint {

using nlohmann::json;

void ModelConfig::validate() const {
  if (provider.empty()) throw std::invalid_argument("model config: empty provider");
  if (model.empty()) throw std::invalid_argument("model config: empty model");
  if (!(temperature >= 0.0 && temperature <= 2.0))
    throw std::invalid_argument("model config: temperature must lie in [0, 2]");
  if (max_output_tokens == 0)
    throw std::invalid_argument("model config: max_output_tokens must be positive");
  if (timeout.count() <= 0) throw std::invalid_argument("model config: timeout must be positive");
}

ClientConfig default_client_config() {
  ClientConfig c;
  c.providers["openai"] = {"openai", "https://api.openai.com", "/v1/chat/completions"};
  c.providers["anthropic"] = {"anthropic", "https://api.anthropic.com", "/v1/messages"};
  c.providers["google"] = {"gemini", "https://generativelanguage.googleapis.com",
                           "/v1beta/models/{model}:generateContent"};
  return c;
}

ClientConfig load_client_config(const std::filesystem::path& ini) {
  namespace pt = boost::property_tree;
  pt::ptree tree;
  try {
    pt::read_ini(ini.string(), tree);
  } catch (const pt::ini_parser_error& e) {
    throw std::runtime_error("cannot read config " + ini.string() + ": " + e.message());
  }
  ClientConfig c;
  for (const auto& [name, sec] : tree) {
    if (name == "client") {
      c.max_in_flight = sec.get<std::size_t>("max_in_flight", c.max_in_flight);
      c.max_attempts = sec.get<int>("max_attempts", c.max_attempts);
      c.backoff = std::chrono::milliseconds(sec.get<long>("backoff_ms", c.backoff.count()));
      continue;
    }
    ProviderConfig p;
    p.style = sec.get<std::string>("style", "openai");
    p.base_url = sec.get<std::string>("base_url", "");
    p.path = sec.get<std::string>("path", "");
    if (p.base_url.empty() || p.path.empty())
      throw std::runtime_error("config section [" + name + "] needs base_url and path");
    if (p.style != "openai" && p.style != "anthropic" && p.style != "gemini")
      throw std::runtime_error("config section [" + name + "]: unknown style " + p.style);
    c.providers[name] = p;
  }
  if (c.max_in_flight == 0 || c.max_attempts <= 0)
    throw std::runtime_error("config: max_in_flight and max_attempts must be positive");
  return c;
}

const char* to_string(Mode m) {
  switch (m) {
    case Mode::live: return "live";
    case Mode::record: return "record";
    case Mode::replay: return "replay";
  }
  return "?";
}

Mode parse_mode(std::string_view s) {
  if (s == "live") return Mode::live;
  if (s == "record") return Mode::record;
  if (s == "replay") return Mode::replay;
  throw std::invalid_argument("unknown mode '" + std::string(s) + "'");
}

HttpResponse HttpTransport::post(const HttpRequest& r) {
  httplib::Client cli(r.base_url);
  cli.set_connection_timeout(r.timeout);
  cli.set_read_timeout(r.timeout);
  cli.set_write_timeout(r.timeout);
  httplib::Headers headers;
  for (const auto& [k, v] : r.headers) headers.emplace(k, v);
  auto res = cli.Post(r.path, headers, r.body, "application/json");
  if (!res) throw TransportError("request to " + r.base_url + " failed: " + httplib::to_string(res.error()));
  return {res->status, res->body};
}

// ---- cassette

namespace {

std::string format_temperature(double t) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, t);
  return std::string(buf, end);
}

std::string utc_now() {
  std::time_t t = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace

std::string Cassette::digest(const ModelConfig& cfg, std::string_view prompt) {
  std::string key = cfg.provider;
  key += '\0';
  key += cfg.model;
  key += '\0';
  key += format_temperature(cfg.temperature);
  key += '\0';
  key += prompt;
  return sha256_hex(key);
}

std::optional<CassetteEntry> Cassette::find(const std::string& digest) const {
  std::lock_guard lock(mu_);
  auto it = entries_.find(digest);
  if (it == entries_.end()) return std::nullopt;
  return it->second;
}

bool Cassette::put(const std::string& digest, CassetteEntry e) {
  std::lock_guard lock(mu_);
  return entries_.emplace(digest, std::move(e)).second;
}

std::size_t Cassette::size() const {
  std::lock_guard lock(mu_);
  return entries_.size();
}

json Cassette::to_json() const {
  std::lock_guard lock(mu_);
  json entries = json::object();
  for (const auto& [k, e] : entries_) {
    entries[k] = {{"response_text", e.response_text},
                  {"finish_reason", e.finish_reason},
                  {"token_counts", {{"prompt", e.tokens.prompt}, {"completion", e.tokens.completion}}},
                  {"timestamp", e.timestamp}};
  }
  return {{"v", 1}, {"entries", entries}};
}

Cassette Cassette::from_json(const json& j) {
  if (!j.is_object() || j.value("v", 0) != 1)
    throw std::runtime_error("cassette: unsupported version");
  Cassette c;
  for (const auto& [k, e] : j.at("entries").items()) {
    CassetteEntry x;
    x.response_text = e.at("response_text").get<std::string>();
    x.finish_reason = e.at("finish_reason").get<std::string>();
    if (e.contains("token_counts")) {
      x.tokens.prompt = e["token_counts"].value("prompt", std::size_t{0});
      x.tokens.completion = e["token_counts"].value("completion", std::size_t{0});
    }
    x.timestamp = e.value("timestamp", "");
    c.entries_.emplace(k, std::move(x));
  }
  return c;
}

Cassette Cassette::load(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) return {};
  try {
    return from_json(json::parse(in));
  } catch (const json::exception& e) {
    throw std::runtime_error("cassette " + p.string() + ": " + e.what());
  }
}

void Cassette::save(const std::filesystem::path& p) const {
  auto tmp = p;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + tmp.string());
    out << to_json().dump(2) << "\n";
  }
  std::filesystem::rename(tmp, p);
}

// ---- provider shapes

std::string credential_variable(std::string_view provider) {
  std::string v;
  for (char c : provider)
    v += std::isalnum(static_cast<unsigned char>(c)) ? static_cast<char>(std::toupper(static_cast<unsigned char>(c))) : '_';
  return v + "_API_KEY";
}

HttpRequest make_request(const ProviderConfig& p, const ModelConfig& m,
                         const std::string& prompt, const std::string& key) {
  HttpRequest r;
  r.base_url = p.base_url;
  r.path = p.path;
  if (auto at = r.path.find("{model}"); at != std::string::npos) r.path.replace(at, 7, m.model);
  r.timeout = m.timeout;
  json body;
  if (p.style == "openai") {
    r.headers.emplace_back("Authorization", "Bearer " + key);
    body = {{"model", m.model},
            {"messages", json::array({{{"role", "user"}, {"content", prompt}}})},
            {"temperature", m.temperature},
            {"max_tokens", m.max_output_tokens}};
  } else if (p.style == "anthropic") {
    r.headers.emplace_back("x-api-key", key);
    r.headers.emplace_back("anthropic-version", "2023-06-01");
    body = {{"model", m.model},
            {"messages", json::array({{{"role", "user"}, {"content", prompt}}})},
            {"temperature", m.temperature},
            {"max_tokens", m.max_output_tokens}};
  } else if (p.style == "gemini") {
    r.headers.emplace_back("x-goog-api-key", key);
    body = {{"contents", json::array({{{"role", "user"}, {"parts", json::array({{{"text", prompt}}})}}})},
            {"generationConfig",
             {{"temperature", m.temperature}, {"maxOutputTokens", m.max_output_tokens}}}};
  } else {
    throw std::invalid_argument("unknown provider style " + p.style);
  }
  r.body = body.dump();
  return r;
}

Completion parse_response(const std::string& style, const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw TransportError(std::string("malformed response body: ") + e.what());
  }
  Completion c;
  try {
    if (style == "openai") {
      const auto& choice = j.at("choices").at(0);
      const auto& content = choice.at("message").at("content");
      c.text = content.is_string() ? content.get<std::string>() : "";
      c.finish_reason = choice.value("finish_reason", "");
      if (j.contains("usage")) {
        c.tokens.prompt = j["usage"].value("prompt_tokens", std::size_t{0});
        c.tokens.completion = j["usage"].value("completion_tokens", std::size_t{0});
      }
    } else if (style == "anthropic") {
      for (const auto& block : j.at("content"))
        if (block.value("type", "") == "text") c.text += block.value("text", "");
      auto stop = j.value("stop_reason", "");
      c.finish_reason = stop == "end_turn" || stop == "stop_sequence" ? "stop"
                        : stop == "max_tokens"                        ? "length"
                                                                      : stop;
      if (j.contains("usage")) {
        c.tokens.prompt = j["usage"].value("input_tokens", std::size_t{0});
        c.tokens.completion = j["usage"].value("output_tokens", std::size_t{0});
      }
    } else if (style == "gemini") {
      const auto& cand = j.at("candidates").at(0);
      if (cand.contains("content") && cand["content"].contains("parts"))
        for (const auto& part : cand["content"]["parts"]) c.text += part.value("text", "");
      auto stop = cand.value("finishReason", "");
      c.finish_reason = stop == "STOP" ? "stop" : stop == "MAX_TOKENS" ? "length" : stop;
      if (j.contains("usageMetadata")) {
        c.tokens.prompt = j["usageMetadata"].value("promptTokenCount", std::size_t{0});
        c.tokens.completion = j["usageMetadata"].value("candidatesTokenCount", std::size_t{0});
      }
    } else {
      throw std::invalid_argument("unknown provider style " + style);
    }
  } catch (const json::exception& e) {
    throw TransportError(std::string("unexpected response shape: ") + e.what());
  }
  return c;
}

// ---- client

Client::Client(ClientConfig cfg, Mode mode, std::shared_ptr<Transport> transport,
               std::shared_ptr<Cassette> cassette,
               std::optional<std::filesystem::path> cassette_path)
    : cfg_(std::move(cfg)),
      mode_(mode),
      transport_(std::move(transport)),
      cassette_(std::move(cassette)),
      cassette_path_(std::move(cassette_path)) {
  env_ = [](const std::string& name) -> std::optional<std::string> {
    const char* v = std::getenv(name.c_str());
    if (!v || !*v) return std::nullopt;
    return std::string(v);
  };
  sleep_ = [](std::chrono::milliseconds d) { std::this_thread::sleep_for(d); };
  if (mode_ != Mode::live && !cassette_) throw std::invalid_argument("record/replay needs a cassette");
  if (mode_ != Mode::replay && !transport_) throw std::invalid_argument("live/record needs a transport");
}

std::counting_semaphore<>& Client::slot(const std::string& provider) {
  std::lock_guard lock(slots_mu_);
  auto& s = slots_[provider];
  if (!s) s = std::make_unique<std::counting_semaphore<>>(static_cast<std::ptrdiff_t>(cfg_.max_in_flight));
  return *s;
}

Completion Client::request(const ModelConfig& m, const std::string& prompt) {
  auto it = cfg_.providers.find(m.provider);
  if (it == cfg_.providers.end()) throw std::invalid_argument("unknown provider " + m.provider);
  auto var = credential_variable(m.provider);
  auto key = env_(var);
  if (!key) throw MissingCredentials("environment variable " + var + " is not set");
  auto req = make_request(it->second, m, prompt, *key);

  auto& sem = slot(m.provider);
  sem.acquire();
  struct Release {
    std::counting_semaphore<>& s;
    ~Release() { s.release(); }
  } release{sem};

  std::string last_error;
  auto delay = cfg_.backoff;
  for (int attempt = 1; attempt <= cfg_.max_attempts; ++attempt) {
    bool retryable = true;
    try {
      auto res = transport_->post(req);
      if (res.status == 200) return parse_response(it->second.style, res.body);
      last_error = "HTTP " + std::to_string(res.status);
      retryable = res.status == 408 || res.status == 429 || res.status >= 500;
    } catch (const TransportError& e) {
      last_error = e.what();
    }
    if (!retryable) break;
    if (attempt < cfg_.max_attempts) {
      sleep_(delay);
      delay *= 2;
    }
  }
  throw TransportError(m.provider + " request failed: " + last_error);
}

Completion Client::complete(const ModelConfig& m, const std::string& prompt) {
  m.validate();
  if (mode_ == Mode::live) return request(m, prompt);

  auto digest = Cassette::digest(m, prompt);
  if (auto e = cassette_->find(digest))
    return {e->response_text, e->finish_reason, e->tokens};
  if (mode_ == Mode::replay)
    throw CassetteMiss("no recorded response for request " + digest);

  auto c = request(m, prompt);
  cassette_->put(digest, {c.text, c.finish_reason, c.tokens, utc_now()});
  if (cassette_path_) {
    std::lock_guard lock(save_mu_);
    cassette_->save(*cassette_path_);
  }
  // Another thread may have recorded the same request first; the stored
  // entry wins so every caller sees the persisted bytes.
  auto e = cassette_->find(digest);
  return {e->response_text, e->finish_reason, e->tokens};
}

}  // namespace absint
