#pragma once

#include <atomic>
#include <chrono>
#include <condition_variable>
#include <cstddef>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "peerpanel/errors.hpp"

namespace peerpanel::llm {

enum class Role { System, User, Assistant };

struct ChatMessage {
  Role role = Role::User;
  std::string content;

  bool operator==(const ChatMessage&) const = default;
};

struct ChatRequest {
  std::string model;
  std::vector<ChatMessage> messages;
  double temperature = 0.0;
  int max_tokens = 4096;
  std::optional<std::string> cache_tag;

  /// Throws PreconditionError on an empty message list, a negative
  /// temperature, a non-positive token budget, or a system message that is
  /// not first.
  void validate() const;
};

enum class FinishReason { Stop, Length, Error };

struct Usage {
  int prompt_tokens = 0;
  int completion_tokens = 0;
};

struct ChatResponse {
  std::string content;
  FinishReason finish_reason = FinishReason::Stop;
  Usage usage;
  bool from_cache = false;
};

std::string_view to_string(Role r) noexcept;
std::string_view to_string(FinishReason r) noexcept;

/// Canonical JSON of the fields that identify a request for caching:
/// model, messages, temperature, cache_tag.
nlohmann::json cache_identity(const ChatRequest& request);

/// SHA-256 (hex) of cache_identity(request).
std::string request_hash(const ChatRequest& request);

/// Full request body in the OpenAI chat-completions shape.
nlohmann::json to_openai_json(const ChatRequest& request);

/// Thrown by backends for failures worth retrying (network errors, 5xx).
class TransientBackendError : public Error {
 public:
  using Error::Error;
};

/// A chat-completion provider. Implementations must be thread-safe.
class Backend {
 public:
  virtual ~Backend() = default;
  virtual ChatResponse send(const ChatRequest& request) = 0;
};

/// Deterministic offline backend. A reply is looked up first by exact
/// request hash, then through the ordered substring rules (first rule whose
/// `contains` text occurs in any message wins). Anything else is a MockMiss.
class MockBackend : public Backend {
 public:
  struct Rule {
    std::string contains;
    std::string reply;
  };

  MockBackend() = default;
  explicit MockBackend(std::map<std::string, std::string> by_hash,
                       std::vector<Rule> rules = {});

  /// Accepts either {"responses": {...}, "rules": [...]} or a flat
  /// {hash: reply} object.
  static std::shared_ptr<MockBackend> from_json(const nlohmann::json& script);

  ChatResponse send(const ChatRequest& request) override;

  std::size_t calls() const { return calls_.load(); }

 private:
  std::map<std::string, std::string> by_hash_;
  std::vector<Rule> rules_;
  std::atomic<std::size_t> calls_{0};
};

std::shared_ptr<Backend> mock_backend(std::map<std::string, std::string> script);

/// Backend driven by a callable; handy for tests that compute replies from
/// prompt contents.
class FunctionBackend : public Backend {
 public:
  using Fn = std::function<std::string(const ChatRequest&)>;
  explicit FunctionBackend(Fn fn) : fn_(std::move(fn)) {}
  ChatResponse send(const ChatRequest& request) override;
  std::size_t calls() const { return calls_.load(); }

 private:
  Fn fn_;
  std::atomic<std::size_t> calls_{0};
};

struct HttpBackendConfig {
  std::string base_url = "http://127.0.0.1:8000";
  std::string api_key;  // sent as a bearer token when non-empty
  std::chrono::seconds timeout{120};
};

/// OpenAI-compatible HTTP backend (POST <base_url>/v1/chat/completions).
class HttpBackend : public Backend {
 public:
  explicit HttpBackend(HttpBackendConfig config);
  ChatResponse send(const ChatRequest& request) override;

 private:
  HttpBackendConfig config_;
};

/// Parses an OpenAI chat-completions response body. Throws MalformedResponse.
ChatResponse parse_openai_response(const std::string& body);

struct RetryPolicy {
  int retries = 3;
  std::chrono::milliseconds initial_backoff{1000};
  double multiplier = 2.0;
  // Injected so tests do not actually sleep.
  std::function<void(std::chrono::milliseconds)> sleep;

  std::chrono::milliseconds backoff(int retry_index) const;
};

struct GatewayConfig {
  std::size_t parallelism = 8;
  RetryPolicy retry;
  // Content-addressed response store; in-memory only when unset.
  std::optional<std::filesystem::path> cache_dir;
};

struct GatewayStats {
  std::size_t backend_calls = 0;
  std::size_t cache_hits = 0;
  std::size_t retries = 0;
  std::size_t max_in_flight = 0;
};

/// Shared entry point for every LLM call: caching, retries with exponential
/// backoff, and a global bound on in-flight backend requests.
class Gateway {
 public:
  Gateway(std::shared_ptr<Backend> backend, GatewayConfig config);

  ChatResponse complete(const ChatRequest& request);

  GatewayStats stats() const;
  const GatewayConfig& config() const { return config_; }

 private:
  std::optional<ChatResponse> lookup(const std::string& key);
  void store(const std::string& key, const ChatRequest& request,
             const ChatResponse& response);
  ChatResponse send_with_retry(const ChatRequest& request);

  std::shared_ptr<Backend> backend_;
  GatewayConfig config_;

  mutable std::mutex mu_;
  std::condition_variable slot_free_;
  std::size_t in_flight_ = 0;
  std::map<std::string, ChatResponse> memory_cache_;
  GatewayStats stats_;
};

}  // namespace peerpanel::llm
