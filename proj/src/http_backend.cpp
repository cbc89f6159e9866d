#include <httplib.h>

#include "peerpanel/gateway.hpp"
#include "peerpanel/http_util.hpp"

namespace peerpanel::llm {

HttpBackend::HttpBackend(HttpBackendConfig config) : config_(std::move(config)) {}

ChatResponse HttpBackend::send(const ChatRequest& request) {
  const auto target = split_base_url(config_.base_url);
  httplib::Client client(target.origin);
  const auto timeout = std::chrono::duration_cast<std::chrono::seconds>(config_.timeout);
  client.set_connection_timeout(timeout);
  client.set_read_timeout(timeout);
  client.set_write_timeout(timeout);

  httplib::Headers headers;
  if (!config_.api_key.empty()) {
    headers.emplace("Authorization", "Bearer " + config_.api_key);
  }
  const auto body = to_openai_json(request).dump();
  auto res = client.Post(target.path_prefix + "/v1/chat/completions", headers, body,
                         "application/json");
  if (!res) {
    throw TransientBackendError("network error: " + httplib::to_string(res.error()));
  }
  if (res->status >= 500) {
    throw TransientBackendError("HTTP " + std::to_string(res->status));
  }
  if (res->status != 200) {
    throw BackendUnavailable("HTTP " + std::to_string(res->status) + ": " + res->body);
  }
  return parse_openai_response(res->body);
}

}  // namespace peerpanel::llm
