#include "peerpanel/gateway.hpp"

#include <cmath>
#include <thread>

#include "peerpanel/fsutil.hpp"

namespace peerpanel::llm {

using nlohmann::json;

std::string_view to_string(Role r) noexcept {
  switch (r) {
    case Role::System: return "system";
    case Role::User: return "user";
    case Role::Assistant: return "assistant";
  }
  return "user";
}

std::string_view to_string(FinishReason r) noexcept {
  switch (r) {
    case FinishReason::Stop: return "stop";
    case FinishReason::Length: return "length";
    case FinishReason::Error: return "error";
  }
  return "error";
}

namespace {

FinishReason finish_from(std::string_view s) {
  if (s == "stop") return FinishReason::Stop;
  if (s == "length") return FinishReason::Length;
  return FinishReason::Error;
}

json messages_json(const ChatRequest& request) {
  json out = json::array();
  for (const auto& m : request.messages) {
    out.push_back({{"role", to_string(m.role)}, {"content", m.content}});
  }
  return out;
}

json response_json(const ChatResponse& r) {
  return {{"content", r.content},
          {"finish_reason", to_string(r.finish_reason)},
          {"usage",
           {{"prompt_tokens", r.usage.prompt_tokens},
            {"completion_tokens", r.usage.completion_tokens}}}};
}

ChatResponse response_from(const json& j) {
  ChatResponse r;
  r.content = j.at("content").get<std::string>();
  r.finish_reason = finish_from(j.at("finish_reason").get<std::string>());
  r.usage.prompt_tokens = j.at("usage").value("prompt_tokens", 0);
  r.usage.completion_tokens = j.at("usage").value("completion_tokens", 0);
  return r;
}

}  // namespace

void ChatRequest::validate() const {
  if (messages.empty()) throw PreconditionError("chat request has no messages");
  if (!(temperature >= 0.0)) throw PreconditionError("temperature must be >= 0");
  if (max_tokens <= 0) throw PreconditionError("max_tokens must be positive");
  for (std::size_t i = 1; i < messages.size(); ++i) {
    if (messages[i].role == Role::System) {
      throw PreconditionError("system message must come first");
    }
  }
}

json cache_identity(const ChatRequest& request) {
  return {{"model", request.model},
          {"messages", messages_json(request)},
          {"temperature", request.temperature},
          {"cache_tag", request.cache_tag ? json(*request.cache_tag) : json(nullptr)}};
}

std::string request_hash(const ChatRequest& request) {
  return sha256_hex(cache_identity(request).dump());
}

json to_openai_json(const ChatRequest& request) {
  return {{"model", request.model},
          {"messages", messages_json(request)},
          {"temperature", request.temperature},
          {"max_tokens", request.max_tokens},
          {"stream", false}};
}

ChatResponse parse_openai_response(const std::string& body) {
  const auto j = json::parse(body, nullptr, false);
  if (j.is_discarded() || !j.is_object()) {
    throw MalformedResponse("response body is not a JSON object");
  }
  try {
    const auto& choice = j.at("choices").at(0);
    ChatResponse r;
    const auto& content = choice.at("message").at("content");
    r.content = content.is_null() ? std::string() : content.get<std::string>();
    if (choice.contains("finish_reason") && choice.at("finish_reason").is_string()) {
      r.finish_reason = finish_from(choice.at("finish_reason").get<std::string>());
    }
    if (j.contains("usage") && j.at("usage").is_object()) {
      r.usage.prompt_tokens = j.at("usage").value("prompt_tokens", 0);
      r.usage.completion_tokens = j.at("usage").value("completion_tokens", 0);
    }
    return r;
  } catch (const json::exception& e) {
    throw MalformedResponse(std::string("unexpected response shape: ") + e.what());
  }
}

MockBackend::MockBackend(std::map<std::string, std::string> by_hash,
                         std::vector<Rule> rules)
    : by_hash_(std::move(by_hash)), rules_(std::move(rules)) {}

std::shared_ptr<MockBackend> MockBackend::from_json(const json& script) {
  if (!script.is_object()) throw SchemaError("mock script must be an object");
  std::map<std::string, std::string> by_hash;
  std::vector<Rule> rules;
  const bool structured =
      script.contains("responses") || script.contains("rules") || script.contains("search");
  if (structured) {
    const auto responses = script.value("responses", json::object());
    for (const auto& [k, v] : responses.items()) {
      by_hash[k] = v.get<std::string>();
    }
    for (const auto& r : script.value("rules", json::array())) {
      rules.push_back({r.at("contains").get<std::string>(), r.at("reply").get<std::string>()});
    }
  } else {
    for (const auto& [k, v] : script.items()) by_hash[k] = v.get<std::string>();
  }
  return std::make_shared<MockBackend>(std::move(by_hash), std::move(rules));
}

ChatResponse MockBackend::send(const ChatRequest& request) {
  calls_.fetch_add(1);
  ChatResponse r;
  if (auto it = by_hash_.find(request_hash(request)); it != by_hash_.end()) {
    r.content = it->second;
    return r;
  }
  for (const auto& rule : rules_) {
    for (const auto& m : request.messages) {
      if (m.content.find(rule.contains) != std::string::npos) {
        r.content = rule.reply;
        return r;
      }
    }
  }
  throw MockMiss("no scripted reply for request " + request_hash(request));
}

std::shared_ptr<Backend> mock_backend(std::map<std::string, std::string> script) {
  return std::make_shared<MockBackend>(std::move(script));
}

ChatResponse FunctionBackend::send(const ChatRequest& request) {
  calls_.fetch_add(1);
  ChatResponse r;
  r.content = fn_(request);
  return r;
}

std::chrono::milliseconds RetryPolicy::backoff(int retry_index) const {
  const double ms = static_cast<double>(initial_backoff.count()) *
                    std::pow(multiplier, static_cast<double>(retry_index));
  return std::chrono::milliseconds(static_cast<long long>(ms));
}

Gateway::Gateway(std::shared_ptr<Backend> backend, GatewayConfig config)
    : backend_(std::move(backend)), config_(std::move(config)) {
  if (!backend_) throw PreconditionError("gateway needs a backend");
  if (config_.parallelism == 0) config_.parallelism = 1;
  if (!config_.retry.sleep) {
    config_.retry.sleep = [](std::chrono::milliseconds d) { std::this_thread::sleep_for(d); };
  }
}

GatewayStats Gateway::stats() const {
  std::lock_guard lock(mu_);
  return stats_;
}

std::optional<ChatResponse> Gateway::lookup(const std::string& key) {
  {
    std::lock_guard lock(mu_);
    if (auto it = memory_cache_.find(key); it != memory_cache_.end()) {
      return it->second;
    }
  }
  if (!config_.cache_dir) return std::nullopt;
  const auto path = *config_.cache_dir / (key + ".json");
  std::error_code ec;
  if (!std::filesystem::exists(path, ec)) return std::nullopt;
  const auto j = json::parse(read_file(path), nullptr, false);
  if (j.is_discarded() || !j.contains("response")) return std::nullopt;
  auto response = response_from(j.at("response"));
  std::lock_guard lock(mu_);
  memory_cache_.emplace(key, response);
  return response;
}

void Gateway::store(const std::string& key, const ChatRequest& request,
                    const ChatResponse& response) {
  {
    std::lock_guard lock(mu_);
    memory_cache_[key] = response;
  }
  if (!config_.cache_dir) return;
  const json record = {{"key", key},
                       {"request", cache_identity(request)},
                       {"response", response_json(response)}};
  write_file_atomic(*config_.cache_dir / (key + ".json"), record.dump(2));
}

ChatResponse Gateway::send_with_retry(const ChatRequest& request) {
  const int attempts = 1 + std::max(0, config_.retry.retries);
  std::string last_error;
  for (int attempt = 0; attempt < attempts; ++attempt) {
    if (attempt > 0) {
      {
        std::lock_guard lock(mu_);
        ++stats_.retries;
      }
      config_.retry.sleep(config_.retry.backoff(attempt - 1));
    }
    {
      std::unique_lock lock(mu_);
      slot_free_.wait(lock, [&] { return in_flight_ < config_.parallelism; });
      ++in_flight_;
      ++stats_.backend_calls;
      stats_.max_in_flight = std::max(stats_.max_in_flight, in_flight_);
    }
    auto release = [&] {
      {
        std::lock_guard lock(mu_);
        --in_flight_;
      }
      slot_free_.notify_one();
    };
    try {
      auto response = backend_->send(request);
      release();
      if (response.finish_reason == FinishReason::Error) {
        last_error = "backend reported finish_reason=error";
        continue;
      }
      return response;
    } catch (const TransientBackendError& e) {
      release();
      last_error = e.what();
    } catch (...) {
      release();
      throw;
    }
  }
  throw BackendUnavailable("backend unavailable after " + std::to_string(attempts) +
                           " attempts: " + last_error);
}

ChatResponse Gateway::complete(const ChatRequest& request) {
  request.validate();
  const auto key = request_hash(request);
  if (auto cached = lookup(key)) {
    {
      std::lock_guard lock(mu_);
      ++stats_.cache_hits;
    }
    cached->from_cache = true;
    return *cached;
  }
  auto response = send_with_retry(request);
  response.from_cache = false;
  store(key, request, response);
  return response;
}

}  // namespace peerpanel::llm
