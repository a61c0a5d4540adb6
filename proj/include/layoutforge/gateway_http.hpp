#pragma once

// Keep httplib out of translation units that never make live calls.

#include <map>
#include <memory>
#include <mutex>

#include <httplib.h>

#include "layoutforge/gateway.hpp"

namespace layoutforge {

class HttpTransport final : public Transport {
 public:
  explicit HttpTransport(const GatewayConfig& config)
      : timeout_s_(config.timeout_s) {}

  HttpResult post_json(
      const std::string& endpoint, const std::string& path,
      const std::vector<std::pair<std::string, std::string>>& headers,
      const std::string& body) override {
    httplib::Headers hdrs;
    std::string content_type = "application/json";
    for (const auto& [k, v] : headers) {
      if (k == "Content-Type") {
        content_type = v;
      } else {
        hdrs.emplace(k, v);
      }
    }
    auto res = client_for(endpoint).Post(path, hdrs, body, content_type);
    if (!res) {
      return {0, "", httplib::to_string(res.error())};
    }
    return {res->status, res->body, ""};
  }

 private:
  httplib::Client& client_for(const std::string& endpoint) {
    std::lock_guard lock(mutex_);
    auto it = clients_.find(endpoint);
    if (it == clients_.end()) {
      it = clients_.emplace(endpoint,
                            std::make_unique<httplib::Client>(endpoint))
               .first;
      it->second->set_connection_timeout(timeout_s_, 0);
      it->second->set_read_timeout(timeout_s_, 0);
      it->second->set_write_timeout(timeout_s_, 0);
    }
    return *it->second;
  }

  int timeout_s_;
  std::mutex mutex_;
  std::map<std::string, std::unique_ptr<httplib::Client>> clients_;
};

inline std::shared_ptr<Transport> make_http_transport(
    const GatewayConfig& config) {
  return std::make_shared<HttpTransport>(config);
}

}  // namespace layoutforge
