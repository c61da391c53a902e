#pragma once

#include <json.hpp>

#include <chrono>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <semaphore>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace absint {

class MissingCredentials : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};
class TransportError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};
class CassetteMiss : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ModelConfig {
  std::string provider;
  std::string model;
  double temperature = 0.0;
  std::size_t max_output_tokens = 8192;
  std::chrono::seconds timeout{300};

  // Throws std::invalid_argument.
  void validate() const;
};

// How requests are shaped for a provider. Styles: "openai" (chat
// completions), "anthropic" (messages), "gemini" (generateContent).
struct ProviderConfig {
  std::string style;
  std::string base_url;  // scheme://host[:port]
  std::string path;      // "{model}" is replaced by the model name
};

struct ClientConfig {
  std::map<std::string, ProviderConfig> providers;
  std::size_t max_in_flight = 4;  // per provider
  int max_attempts = 3;
  std::chrono::milliseconds backoff{1000};  // doubled after every failure
};

// INI file: a [client] section with max_in_flight, max_attempts, backoff_ms
// and one section per provider with style, base_url, path.
ClientConfig load_client_config(const std::filesystem::path& ini);
ClientConfig default_client_config();

struct TokenCounts {
  std::size_t prompt = 0;
  std::size_t completion = 0;
};

struct Completion {
  std::string text;
  // "stop" for a normal end, "length" when the output limit cut it off,
  // otherwise whatever the provider reported.
  std::string finish_reason;
  TokenCounts tokens;
  bool truncated() const { return finish_reason == "length"; }
};

enum class Mode { live, record, replay };
const char* to_string(Mode m);
Mode parse_mode(std::string_view s);

struct HttpRequest {
  std::string base_url;
  std::string path;
  std::vector<std::pair<std::string, std::string>> headers;
  std::string body;
  std::chrono::seconds timeout{300};
};

struct HttpResponse {
  int status = 0;
  std::string body;
};

class Transport {
 public:
  virtual ~Transport() = default;
  // Throws TransportError when no response was received.
  virtual HttpResponse post(const HttpRequest& r) = 0;
};

class HttpTransport : public Transport {
 public:
  HttpResponse post(const HttpRequest& r) override;
};

struct CassetteEntry {
  std::string response_text;
  std::string finish_reason;
  TokenCounts tokens;
  std::string timestamp;  // UTC, ISO 8601, time of recording
};

// Request digest -> recorded completion, stored as one JSON document
// {"v": 1, "entries": {...}}. Entries are never overwritten.
class Cassette {
 public:
  Cassette() = default;
  Cassette(Cassette&& o) noexcept : entries_(std::move(o.entries_)) {}
  Cassette& operator=(Cassette&& o) noexcept {
    std::scoped_lock lock(mu_, o.mu_);
    entries_ = std::move(o.entries_);
    return *this;
  }
  static Cassette load(const std::filesystem::path& p);  // empty if absent
  void save(const std::filesystem::path& p) const;

  static std::string digest(const ModelConfig& cfg, std::string_view prompt);

  std::optional<CassetteEntry> find(const std::string& digest) const;
  // Returns false when the digest is already present.
  bool put(const std::string& digest, CassetteEntry e);
  std::size_t size() const;

  nlohmann::json to_json() const;
  static Cassette from_json(const nlohmann::json& j);

 private:
  mutable std::mutex mu_;
  std::map<std::string, CassetteEntry> entries_;
};

using EnvLookup = std::function<std::optional<std::string>(const std::string&)>;
using Sleeper = std::function<void(std::chrono::milliseconds)>;

// "<PROVIDER>_API_KEY", upper-cased, other characters mapped to '_'.
std::string credential_variable(std::string_view provider);

// Safe to share between threads.
class Client {
 public:
  Client(ClientConfig cfg, Mode mode, std::shared_ptr<Transport> transport,
         std::shared_ptr<Cassette> cassette,
         std::optional<std::filesystem::path> cassette_path = std::nullopt);

  void set_env(EnvLookup env) { env_ = std::move(env); }
  void set_sleeper(Sleeper s) { sleep_ = std::move(s); }

  // live: ask the provider. record: return the recorded entry if there is
  // one, else ask and persist. replay: cassette only, CassetteMiss when the
  // request was never recorded.
  Completion complete(const ModelConfig& m, const std::string& prompt);

  Mode mode() const { return mode_; }

 private:
  Completion request(const ModelConfig& m, const std::string& prompt);
  std::counting_semaphore<>& slot(const std::string& provider);

  ClientConfig cfg_;
  Mode mode_;
  std::shared_ptr<Transport> transport_;
  std::shared_ptr<Cassette> cassette_;
  std::optional<std::filesystem::path> cassette_path_;
  EnvLookup env_;
  Sleeper sleep_;
  std::mutex slots_mu_;
  std::map<std::string, std::unique_ptr<std::counting_semaphore<>>> slots_;
  std::mutex save_mu_;
};

// Request/response shapes per provider style; exposed for tests.
HttpRequest make_request(const ProviderConfig& p, const ModelConfig& m,
                         const std::string& prompt, const std::string& key);
Completion parse_response(const std::string& style, const std::string& body);

}  // namespace absint
