#include "peerpanel/search.hpp"

#include <httplib.h>

#include <set>
#include <thread>

#include "peerpanel/errors.hpp"
#include "peerpanel/http_util.hpp"

namespace peerpanel::lit {

std::vector<LiteratureItem> dedup_items(std::vector<LiteratureItem> items) {
  std::set<std::string> seen;
  std::vector<LiteratureItem> out;
  out.reserve(items.size());
  for (auto& item : items) {
    if (seen.insert(item.item_id).second) out.push_back(std::move(item));
  }
  return out;
}

std::vector<LiteratureItem> parse_search_response(const std::string& body) {
  const auto j = json::parse(body, nullptr, false);
  if (j.is_discarded() || !j.is_object()) {
    throw SearchUnavailable("search response is not a JSON object");
  }
  std::vector<LiteratureItem> items;
  for (const auto& p : j.value("data", json::array())) {
    if (!p.is_object() || !p.contains("paperId") || !p.at("paperId").is_string()) continue;
    LiteratureItem item;
    item.item_id = p.at("paperId").get<std::string>();
    if (p.contains("title") && p.at("title").is_string()) item.title = p.at("title");
    if (p.contains("abstract") && p.at("abstract").is_string()) item.abstract = p.at("abstract");
    if (p.contains("year") && p.at("year").is_number_integer()) item.year = p.at("year");
    if (p.contains("venue") && p.at("venue").is_string() &&
        !p.at("venue").get<std::string>().empty()) {
      item.venue = p.at("venue").get<std::string>();
    }
    items.push_back(std::move(item));
  }
  return items;
}

SemanticScholarClient::SemanticScholarClient(SemanticScholarConfig config)
    : config_(std::move(config)) {
  if (!config_.retry.sleep) {
    config_.retry.sleep = [](std::chrono::milliseconds d) { std::this_thread::sleep_for(d); };
  }
}

std::vector<LiteratureItem> SemanticScholarClient::search(const std::string& query,
                                                          int limit) {
  if (query.empty()) throw PreconditionError("search query must be non-empty");
  if (limit <= 0) throw PreconditionError("search limit must be positive");
  const auto target = split_base_url(config_.base_url);
  httplib::Client client(target.origin);
  client.set_connection_timeout(config_.timeout);
  client.set_read_timeout(config_.timeout);
  httplib::Headers headers;
  if (!config_.api_key.empty()) headers.emplace("x-api-key", config_.api_key);
  const httplib::Params params{{"query", query},
                               {"limit", std::to_string(limit)},
                               {"fields", "title,abstract,year,venue"}};
  const std::string path = target.path_prefix + "/graph/v1/paper/search";

  const int attempts = 1 + std::max(0, config_.retry.retries);
  bool last_was_quota = false;
  std::string last_error;
  for (int attempt = 0; attempt < attempts; ++attempt) {
    if (attempt > 0) {
      retries_.fetch_add(1);
      config_.retry.sleep(config_.retry.backoff(attempt - 1));
    }
    auto res = client.Get(path, params, headers);
    if (!res) {
      last_was_quota = false;
      last_error = "network error: " + httplib::to_string(res.error());
      continue;
    }
    if (res->status == 429) {
      last_was_quota = true;
      last_error = "HTTP 429";
      continue;
    }
    if (res->status >= 500) {
      last_was_quota = false;
      last_error = "HTTP " + std::to_string(res->status);
      continue;
    }
    if (res->status != 200) {
      throw SearchUnavailable("HTTP " + std::to_string(res->status) + ": " + res->body);
    }
    auto items = dedup_items(parse_search_response(res->body));
    if (items.size() > static_cast<std::size_t>(limit)) items.resize(static_cast<std::size_t>(limit));
    return items;
  }
  if (last_was_quota) throw QuotaExceeded("search quota exceeded: " + last_error);
  throw SearchUnavailable("search unavailable: " + last_error);
}

std::shared_ptr<MockSearchClient> MockSearchClient::from_json(const json& j) {
  std::map<std::string, std::vector<LiteratureItem>> by_query;
  for (const auto& [query, items] : j.items()) {
    by_query[query] = items.get<std::vector<LiteratureItem>>();
  }
  return std::make_shared<MockSearchClient>(std::move(by_query));
}

std::vector<LiteratureItem> MockSearchClient::search(const std::string& query, int limit) {
  if (query.empty()) throw PreconditionError("search query must be non-empty");
  auto it = by_query_.find(query);
  if (it == by_query_.end()) it = by_query_.find("*");
  if (it == by_query_.end()) return {};
  auto items = dedup_items(it->second);
  if (limit >= 0 && items.size() > static_cast<std::size_t>(limit)) {
    items.resize(static_cast<std::size_t>(limit));
  }
  return items;
}

}  // namespace peerpanel::lit
