#pragma once

#include <atomic>
#include <chrono>
#include <map>
#include <string>
#include <vector>

#include "peerpanel/gateway.hpp"
#include "peerpanel/types.hpp"

namespace peerpanel::lit {

/// Paper search provider. Implementations must be thread-safe.
class SearchClient {
 public:
  virtual ~SearchClient() = default;
  /// At most `limit` items, deduplicated by item_id.
  virtual std::vector<LiteratureItem> search(const std::string& query, int limit) = 0;
};

/// Keeps the first occurrence of every item_id, preserving order.
std::vector<LiteratureItem> dedup_items(std::vector<LiteratureItem> items);

struct SemanticScholarConfig {
  std::string base_url = "https://api.semanticscholar.org";
  std::string api_key;  // sent as x-api-key when non-empty
  std::chrono::seconds timeout{30};
  llm::RetryPolicy retry;
};

/// Client for the /graph/v1/paper/search endpoint. Retries 429, 5xx and
/// network errors; throws QuotaExceeded when the budget runs out on 429 and
/// SearchUnavailable otherwise.
class SemanticScholarClient : public SearchClient {
 public:
  explicit SemanticScholarClient(SemanticScholarConfig config);
  std::vector<LiteratureItem> search(const std::string& query, int limit) override;

  std::size_t retries() const { return retries_.load(); }

 private:
  SemanticScholarConfig config_;
  std::atomic<std::size_t> retries_{0};
};

/// Parses a search response body ({"data": [...]}) into items.
std::vector<LiteratureItem> parse_search_response(const std::string& body);

/// Fixture-backed search: exact query match, else the "*" entry, else empty.
class MockSearchClient : public SearchClient {
 public:
  explicit MockSearchClient(std::map<std::string, std::vector<LiteratureItem>> by_query)
      : by_query_(std::move(by_query)) {}
  static std::shared_ptr<MockSearchClient> from_json(const json& j);

  std::vector<LiteratureItem> search(const std::string& query, int limit) override;

 private:
  std::map<std::string, std::vector<LiteratureItem>> by_query_;
};

}  // namespace peerpanel::lit
