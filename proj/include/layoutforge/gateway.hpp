#pragma once

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <semaphore>
#include <shared_mutex>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include <json.hpp>

#include "layoutforge/detail/crypto.hpp"
#include "layoutforge/detail/util.hpp"
#include "layoutforge/errors.hpp"
#include "layoutforge/prompts.hpp"

namespace layoutforge {

using json = nlohmann::json;

enum class ModelRole {
  bev_generator,
  layout_lifter,
  spatial_evaluator,
  quant_evaluator,
  descriptor,
};

inline const char* role_name(ModelRole role) {
  switch (role) {
    case ModelRole::bev_generator: return "bev_generator";
    case ModelRole::layout_lifter: return "layout_lifter";
    case ModelRole::spatial_evaluator: return "spatial_evaluator";
    case ModelRole::quant_evaluator: return "quant_evaluator";
    case ModelRole::descriptor: return "descriptor";
  }
  return "unknown";
}

inline std::optional<ModelRole> role_from_name(std::string_view name) {
  static const std::pair<const char*, ModelRole> table[] = {
      {"bev_generator", ModelRole::bev_generator},
      {"layout_lifter", ModelRole::layout_lifter},
      {"spatial_evaluator", ModelRole::spatial_evaluator},
      {"quant_evaluator", ModelRole::quant_evaluator},
      {"descriptor", ModelRole::descriptor}};
  for (const auto& [n, r] : table) {
    if (name == n) return r;
  }
  return std::nullopt;
}

struct DecodeParams {
  double temperature = 1.0;
  int max_tokens = 4096;
  int seed = 0;

  bool operator==(const DecodeParams&) const = default;
};

/// One model call. The image is the deterministic BEV rasterization and is
/// only ever attached to Spatial Evaluator requests.
struct OracleRequest {
  ModelRole model_role = ModelRole::bev_generator;
  std::string prompt;
  std::string image_png;  // empty unless model_role == spatial_evaluator
  DecodeParams decode;

  void validate() const {
    bool has_image = !image_png.empty();
    if (has_image != (model_role == ModelRole::spatial_evaluator)) {
      throw Error(std::string("image must be attached iff the role is "
                              "spatial_evaluator; role is ") +
                  role_name(model_role));
    }
  }

  /// Content-addressed digest over every field that affects the response.
  /// Length-prefixed segments keep the encoding unambiguous; doubles use
  /// their shortest round-trip form so the digest is stable across runs.
  std::string digest() const {
    std::string canon;
    canon += "role=";
    canon += role_name(model_role);
    canon += '\n';
    canon += "temperature=" + detail::format_real(decode.temperature) + '\n';
    canon += "max_tokens=" + std::to_string(decode.max_tokens) + '\n';
    canon += "seed=" + std::to_string(decode.seed) + '\n';
    canon += "prompt:" + std::to_string(prompt.size()) + '\n';
    canon += prompt;
    canon += '\n';
    canon += "image:" + std::to_string(image_png.size()) + '\n';
    canon += image_png;
    return detail::sha256_hex(canon);
  }
};

// ---- cassette ----------------------------------------------------------- //

/// Append-only digest -> response store. Replays are exact-match; the first
/// response recorded for a digest wins. File form: one
/// `digest_hex<TAB>base64(response)` line per entry, sorted by digest.
class Cassette {
 public:
  Cassette() = default;
  Cassette(const Cassette& other) : entries_(other.snapshot()) {}
  Cassette(Cassette&& other) noexcept : entries_(other.snapshot()) {}
  Cassette& operator=(const Cassette& other) {
    if (this != &other) {
      auto copy = other.snapshot();
      std::unique_lock lock(mutex_);
      entries_ = std::move(copy);
    }
    return *this;
  }
  Cassette& operator=(Cassette&& other) noexcept {
    return *this = static_cast<const Cassette&>(other);
  }

  std::optional<std::string> lookup(const std::string& digest) const {
    std::shared_lock lock(mutex_);
    auto it = entries_.find(digest);
    if (it == entries_.end()) return std::nullopt;
    return it->second;
  }

  /// Returns false when the digest was already present (entry kept).
  bool insert(const std::string& digest, std::string response) {
    std::unique_lock lock(mutex_);
    return entries_.emplace(digest, std::move(response)).second;
  }

  std::size_t size() const {
    std::shared_lock lock(mutex_);
    return entries_.size();
  }

  std::map<std::string, std::string> snapshot() const {
    std::shared_lock lock(mutex_);
    return entries_;
  }

  bool operator==(const Cassette& other) const {
    return snapshot() == other.snapshot();
  }

 private:
  mutable std::shared_mutex mutex_;
  std::map<std::string, std::string> entries_;
};

inline std::string cassette_serialize(const Cassette& cassette) {
  std::string out;
  for (const auto& [digest, response] : cassette.snapshot()) {
    out += digest;
    out += '\t';
    out += detail::base64_encode(response);
    out += '\n';
  }
  return out;
}

inline void cassette_persist(const Cassette& cassette,
                             const std::string& path) {
  std::ofstream file(path, std::ios::binary | std::ios::trunc);
  if (!file) throw Error("cannot write cassette file: " + path);
  file << cassette_serialize(cassette);
}

inline Cassette cassette_parse(std::string_view text) {
  Cassette cassette;
  std::size_t offset = 0;
  while (offset < text.size()) {
    std::size_t nl = text.find('\n', offset);
    if (nl == std::string_view::npos) {
      throw CorruptCassette(offset, "truncated line (missing newline)");
    }
    std::string_view line = text.substr(offset, nl - offset);
    std::size_t tab = line.find('\t');
    if (tab == std::string_view::npos) {
      throw CorruptCassette(offset, "missing tab separator");
    }
    std::string_view digest = line.substr(0, tab);
    if (digest.size() != 64 ||
        digest.find_first_not_of("0123456789abcdef") != std::string_view::npos) {
      throw CorruptCassette(offset, "digest is not 64 hex chars");
    }
    auto decoded = detail::base64_decode(line.substr(tab + 1));
    if (!decoded) throw CorruptCassette(offset, "invalid base64 payload");
    cassette.insert(std::string(digest), std::move(*decoded));
    offset = nl + 1;
  }
  return cassette;
}

inline Cassette cassette_load(const std::string& path) {
  std::ifstream file(path, std::ios::binary);
  if (!file) throw Error("cannot read cassette file: " + path);
  std::string text((std::istreambuf_iterator<char>(file)),
                   std::istreambuf_iterator<char>());
  return cassette_parse(text);
}

// ---- transport ----------------------------------------------------------- //

struct HttpResult {
  int status = 0;
  std::string body;
  std::string transport_error;  // nonempty when no HTTP exchange happened
};

/// One POST to a chat-completion endpoint. Injected so tests can count and
/// script calls without a network.
class Transport {
 public:
  virtual ~Transport() = default;
  virtual HttpResult post_json(const std::string& endpoint,
                               const std::string& path,
                               const std::vector<std::pair<std::string,
                                                           std::string>>& headers,
                               const std::string& body) = 0;
};

struct RetryPolicy {
  int max_attempts = 3;
  int initial_backoff_ms = 250;
  double backoff_factor = 2.0;
};

struct RoleConfig {
  std::string model = "default-model";
  std::string endpoint;  // empty: use the gateway-wide endpoint
  DecodeParams decode;
};

/// Endpoint and decode configuration for live calls. Credentials come only
/// from the environment variable named here, never from file values.
struct GatewayConfig {
  std::string endpoint = "http://localhost:8000";
  std::string chat_path = "/v1/chat/completions";
  std::string api_key_env = "LAYOUTFORGE_API_KEY";
  std::map<ModelRole, RoleConfig> roles;
  RetryPolicy retry;
  int timeout_s = 120;
  int in_flight_cap = 8;

  const RoleConfig& role(ModelRole r) const {
    static const RoleConfig fallback;
    auto it = roles.find(r);
    return it == roles.end() ? fallback : it->second;
  }
};

// Wire adapter. The chat-completion field names live here and nowhere else:
// request {model, messages[{role, content}], temperature, max_tokens, seed},
// image parts as OpenAI-style {type: "image_url", image_url: {url: data-URI}},
// response {choices[0].message.content}.
namespace detail {

inline std::string build_chat_request(const OracleRequest& req,
                                      const std::string& model) {
  json content;
  if (req.image_png.empty()) {
    content = req.prompt;
  } else {
    content = json::array(
        {json{{"type", "text"}, {"text", req.prompt}},
         json{{"type", "image_url"},
              {"image_url",
               {{"url",
                 "data:image/png;base64," + base64_encode(req.image_png)}}}}});
  }
  json body{{"model", model},
            {"messages", json::array({json{{"role", "user"},
                                           {"content", content}}})},
            {"temperature", req.decode.temperature},
            {"max_tokens", req.decode.max_tokens},
            {"seed", req.decode.seed}};
  return body.dump();
}

inline std::string parse_chat_response(const std::string& body) {
  json j = json::parse(body, nullptr, false);
  if (j.is_discarded()) throw TransportError("response is not valid JSON");
  if (!j.contains("choices") || !j["choices"].is_array() ||
      j["choices"].empty()) {
    throw TransportError("response has no choices");
  }
  const json& msg = j["choices"][0];
  if (msg.contains("message") && msg["message"].contains("content") &&
      msg["message"]["content"].is_string()) {
    return msg["message"]["content"].get<std::string>();
  }
  throw TransportError("response has no message content");
}

}  // namespace detail

class HttplibTransport;  // defined in gateway_http.hpp to keep httplib optional

enum class BackendMode { replay, record, live };

inline std::optional<BackendMode> backend_mode_from_name(std::string_view s) {
  if (s == "replay") return BackendMode::replay;
  if (s == "record") return BackendMode::record;
  if (s == "live") return BackendMode::live;
  return std::nullopt;
}

/// Uniform model access. Replay never touches the network; record consults
/// the cassette first and persists anything new; live always calls out.
/// Safe for concurrent callers: live traffic is capped by a semaphore and
/// cassette access is internally synchronized.
class Gateway {
 public:
  Gateway(BackendMode mode, GatewayConfig config,
          std::shared_ptr<Cassette> cassette,
          std::shared_ptr<Transport> transport)
      : mode_(mode),
        config_(std::move(config)),
        cassette_(std::move(cassette)),
        transport_(std::move(transport)),
        in_flight_(std::max(1, config_.in_flight_cap)) {
    if (mode_ != BackendMode::live && !cassette_) {
      throw Error("replay/record mode needs a cassette");
    }
    if (mode_ != BackendMode::replay && !transport_) {
      throw Error("record/live mode needs a transport");
    }
  }

  std::string complete(const OracleRequest& request) {
    request.validate();
    std::string digest = request.digest();

    if (mode_ != BackendMode::live && cassette_) {
      if (auto hit = cassette_->lookup(digest)) return *hit;
      if (mode_ == BackendMode::replay) throw CassetteMiss(digest);
    }

    std::string response = call_live(request);
    if (mode_ == BackendMode::record) cassette_->insert(digest, response);
    return response;
  }

  const GatewayConfig& config() const { return config_; }

 private:
  std::string call_live(const OracleRequest& request) {
    const RoleConfig& role = config_.role(request.model_role);
    std::string body = detail::build_chat_request(request, role.model);

    std::vector<std::pair<std::string, std::string>> headers = {
        {"Content-Type", "application/json"}};
    if (const char* key = std::getenv(config_.api_key_env.c_str());
        key && *key) {
      headers.emplace_back("Authorization", std::string("Bearer ") + key);
    }

    in_flight_.acquire();
    struct Release {
      std::counting_semaphore<>& sem;
      ~Release() { sem.release(); }
    } release{in_flight_};

    int backoff_ms = config_.retry.initial_backoff_ms;
    bool rate_limited = false;
    std::string last_error;
    for (int attempt = 1; attempt <= config_.retry.max_attempts; ++attempt) {
      if (attempt > 1 && backoff_ms > 0) {
        std::this_thread::sleep_for(std::chrono::milliseconds(backoff_ms));
        backoff_ms = static_cast<int>(backoff_ms *
                                      config_.retry.backoff_factor);
      }
      HttpResult res = transport_->post_json(
          role.endpoint.empty() ? config_.endpoint : role.endpoint,
          config_.chat_path, headers, body);
      if (!res.transport_error.empty()) {
        last_error = res.transport_error;
        rate_limited = false;
        continue;
      }
      if (res.status == 429) {
        rate_limited = true;
        last_error = "HTTP 429";
        continue;
      }
      if (res.status >= 500) {
        rate_limited = false;
        last_error = "HTTP " + std::to_string(res.status);
        continue;
      }
      if (res.status != 200) {
        throw TransportError("HTTP " + std::to_string(res.status) + ": " +
                             res.body.substr(0, 200));
      }
      return detail::parse_chat_response(res.body);
    }
    if (rate_limited) throw RateLimited(config_.retry.max_attempts);
    throw TransportError("request failed after " +
                         std::to_string(config_.retry.max_attempts) +
                         " attempts: " + last_error);
  }

  BackendMode mode_;
  GatewayConfig config_;
  std::shared_ptr<Cassette> cassette_;
  std::shared_ptr<Transport> transport_;
  std::counting_semaphore<> in_flight_;
};

// ---- robust JSON extraction ---------------------------------------------- //

/// Pulls the first balanced JSON object or array out of model output,
/// tolerating code fences and surrounding prose. Candidates that span
/// balanced braces but fail strict parsing (garbage inside the structure)
/// are rejected; later candidates still get a chance.
inline json extract_json(std::string_view response) {
  bool saw_opener = false;
  for (std::size_t i = 0; i < response.size(); ++i) {
    char opener = response[i];
    if (opener != '{' && opener != '[') continue;
    saw_opener = true;
    char closer = opener == '{' ? '}' : ']';

    int depth = 0;
    bool in_string = false;
    bool escaped = false;
    for (std::size_t j = i; j < response.size(); ++j) {
      char c = response[j];
      if (in_string) {
        if (escaped) {
          escaped = false;
        } else if (c == '\\') {
          escaped = true;
        } else if (c == '"') {
          in_string = false;
        }
        continue;
      }
      if (c == '"') {
        in_string = true;
      } else if (c == opener) {
        ++depth;
      } else if (c == closer) {
        --depth;
        if (depth == 0) {
          std::string_view span = response.substr(i, j - i + 1);
          json parsed = json::parse(span, nullptr, false);
          if (!parsed.is_discarded()) return parsed;
          break;  // balanced but invalid; try the next opener
        }
      }
    }
  }
  if (!saw_opener) throw NoStructureFound();
  throw UnbalancedStructure("no balanced span parses as JSON");
}

// ---- config file ---------------------------------------------------------- //

/// Reads a gateway config (JSON). Unknown keys are ignored; anything absent
/// keeps its default. Never reads credentials from the file.
inline GatewayConfig load_gateway_config(const json& j) {
  GatewayConfig cfg;
  if (j.contains("endpoint")) cfg.endpoint = j["endpoint"].get<std::string>();
  if (j.contains("chat_path")) {
    cfg.chat_path = j["chat_path"].get<std::string>();
  }
  if (j.contains("api_key_env")) {
    cfg.api_key_env = j["api_key_env"].get<std::string>();
  }
  if (j.contains("timeout_s")) cfg.timeout_s = j["timeout_s"].get<int>();
  if (j.contains("in_flight_cap")) {
    cfg.in_flight_cap = j["in_flight_cap"].get<int>();
  }
  if (j.contains("retry")) {
    const json& r = j["retry"];
    if (r.contains("max_attempts")) {
      cfg.retry.max_attempts = r["max_attempts"].get<int>();
    }
    if (r.contains("initial_backoff_ms")) {
      cfg.retry.initial_backoff_ms = r["initial_backoff_ms"].get<int>();
    }
    if (r.contains("backoff_factor")) {
      cfg.retry.backoff_factor = r["backoff_factor"].get<double>();
    }
  }
  if (j.contains("roles") && j["roles"].is_object()) {
    for (auto it = j["roles"].begin(); it != j["roles"].end(); ++it) {
      auto role = role_from_name(it.key());
      if (!role) continue;
      RoleConfig rc;
      const json& v = it.value();
      if (v.contains("model")) rc.model = v["model"].get<std::string>();
      if (v.contains("endpoint")) {
        rc.endpoint = v["endpoint"].get<std::string>();
      }
      if (v.contains("temperature")) {
        rc.decode.temperature = v["temperature"].get<double>();
      }
      if (v.contains("max_tokens")) {
        rc.decode.max_tokens = v["max_tokens"].get<int>();
      }
      if (v.contains("seed")) rc.decode.seed = v["seed"].get<int>();
      cfg.roles[*role] = rc;
    }
  }
  return cfg;
}

inline GatewayConfig load_gateway_config_file(const std::string& path) {
  std::ifstream file(path);
  if (!file) throw Error("cannot read config file: " + path);
  json j = json::parse(file, nullptr, true);
  return load_gateway_config(j);
}

}  // namespace layoutforge
