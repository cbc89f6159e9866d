#include "peerpanel/lit_agent.hpp"

#include <algorithm>
#include <cctype>
#include <future>
#include <set>
#include <sstream>

#include "peerpanel/errors.hpp"
#include "peerpanel/text.hpp"

namespace peerpanel::lit {

LiteratureAgent::LiteratureAgent(llm::Gateway& gateway, SearchClient& search,
                                 LitAgentConfig config)
    : gateway_(gateway), search_(search), config_(std::move(config)) {}

std::vector<std::string> parse_query_lines(const std::string& reply) {
  std::vector<std::string> out;
  std::set<std::string> seen;
  for (const auto& raw : text::split_lines(reply)) {
    std::string line = text::trim(raw);
    // "1. foo", "2) foo", "- foo", "* foo"
    std::size_t i = 0;
    while (i < line.size() && std::isdigit(static_cast<unsigned char>(line[i]))) ++i;
    if (i > 0 && i < line.size() && (line[i] == '.' || line[i] == ')')) {
      line = text::trim(line.substr(i + 1));
    } else if (!line.empty() && (line[0] == '-' || line[0] == '*' || line[0] == '+')) {
      line = text::trim(line.substr(1));
    }
    if (line.size() >= 2 && (line.front() == '"' || line.front() == '\'') &&
        line.back() == line.front()) {
      line = text::trim(line.substr(1, line.size() - 2));
    }
    if (line.empty() || line.starts_with("```")) continue;
    if (seen.insert(text::normalize_for_match(line)).second) out.push_back(line);
  }
  return out;
}

namespace {

// Deterministic fallback queries from the title: the full title, then
// three-word windows, then single longer words.
std::vector<std::string> title_queries(const Manuscript& m) {
  std::vector<std::string> out;
  const std::string title = text::trim(m.title);
  if (!title.empty()) out.push_back(title);
  std::vector<std::string> words;
  std::istringstream in(title);
  for (std::string w; in >> w;) words.push_back(w);
  for (std::size_t i = 0; i + 3 <= words.size(); ++i) {
    out.push_back(words[i] + " " + words[i + 1] + " " + words[i + 2]);
  }
  for (const auto& w : words) {
    if (w.size() >= 4) out.push_back(w);
  }
  return out;
}

}  // namespace

std::vector<std::string> LiteratureAgent::generate_queries(const Manuscript& m, int n,
                                                           Trace* trace) {
  if (text::trim(m.body).empty()) throw PreconditionError("manuscript body is empty");
  if (n <= 0) throw PreconditionError("query count must be positive");
  auto request = prompts::make_request(
      config_.llm, "You are a research librarian.", prompts::query_generation(m, n));
  if (trace) trace->prompt("literature/queries", request);
  auto queries = parse_query_lines(gateway_.complete(request).content);
  if (queries.size() > static_cast<std::size_t>(n)) queries.resize(static_cast<std::size_t>(n));

  const std::size_t from_model = queries.size();
  std::set<std::string> seen;
  for (const auto& q : queries) seen.insert(text::normalize_for_match(q));
  auto pad = title_queries(m);
  for (std::size_t i = 0; queries.size() < static_cast<std::size_t>(n); ++i) {
    std::string candidate = i < pad.size()
                                ? pad[i]
                                : m.title + " related work " + std::to_string(i - pad.size() + 1);
    if (seen.insert(text::normalize_for_match(candidate)).second) queries.push_back(candidate);
  }
  if (trace && from_model < queries.size()) {
    trace->warn("padded " + std::to_string(queries.size() - from_model) +
                " literature queries from title terms");
  }
  return queries;
}

std::vector<LiteratureItem> LiteratureAgent::search(const std::string& query, int limit) {
  if (query.empty()) throw PreconditionError("search query must be non-empty");
  auto items = dedup_items(search_.search(query, limit));
  if (items.size() > static_cast<std::size_t>(limit)) items.resize(static_cast<std::size_t>(limit));
  return items;
}

std::map<std::string, double> parse_scores(const std::string& reply) {
  std::map<std::string, double> scores;
  auto clamp = [](double s) { return std::clamp(s, 0.0, 10.0); };
  if (auto j = text::extract_json_object(reply)) {
    const auto& obj = j->contains("scores") ? j->at("scores") : *j;
    if (obj.is_object()) {
      for (const auto& [id, v] : obj.items()) {
        if (v.is_number()) scores[id] = clamp(v.get<double>());
      }
      if (!scores.empty()) return scores;
    }
  }
  for (const auto& raw : text::split_lines(reply)) {
    const auto line = text::trim(raw);
    const auto colon = line.rfind(':');
    if (colon == std::string::npos) continue;
    std::string id = text::trim(line.substr(0, colon));
    if (!id.empty() && id.front() == '-') id = text::trim(id.substr(1));
    if (id.size() >= 2 && id.front() == '[' && id.back() == ']') id = id.substr(1, id.size() - 2);
    try {
      scores[id] = clamp(std::stod(text::trim(line.substr(colon + 1))));
    } catch (const std::exception&) {
    }
  }
  return scores;
}

std::vector<LiteratureItem> LiteratureAgent::rank_candidates(
    const Manuscript& m, const std::vector<LiteratureItem>& candidates, int k, Trace* trace) {
  if (candidates.empty()) throw PreconditionError("no candidates to rank");
  if (k <= 0) throw PreconditionError("k must be positive");
  auto unique = dedup_items(candidates);
  auto request = prompts::make_request(config_.llm, "You are a research librarian.",
                                       prompts::relevance_scoring(m, unique));
  if (trace) trace->prompt("literature/ranking", request);
  const auto scores = parse_scores(gateway_.complete(request).content);

  auto score_of = [&](const LiteratureItem& item) {
    auto it = scores.find(item.item_id);
    return it == scores.end() ? 0.0 : it->second;
  };
  std::stable_sort(unique.begin(), unique.end(), [&](const auto& a, const auto& b) {
    const double sa = score_of(a);
    const double sb = score_of(b);
    if (sa != sb) return sa > sb;
    if (a.year != b.year) return a.year > b.year;
    return a.item_id < b.item_id;
  });
  if (unique.size() > static_cast<std::size_t>(k)) unique.resize(static_cast<std::size_t>(k));
  return unique;
}

LiteratureSummary LiteratureAgent::summarize(const Manuscript& m,
                                             const std::vector<LiteratureItem>& topk,
                                             Trace* trace) {
  if (topk.empty()) throw PreconditionError("no literature items to summarize");
  LiteratureSummary out;
  out.paper_id = m.paper_id;
  out.ranked_items = topk;
  std::vector<std::string> missing;
  for (int attempt = 0;; ++attempt) {
    auto request =
        prompts::make_request(config_.llm, "You are a research librarian.",
                              prompts::literature_summary(m, topk, missing));
    // Identical retries would be served from the cache.
    if (attempt > 0) request.cache_tag = "regeneration-" + std::to_string(attempt);
    if (trace) trace->prompt("literature/summary", request);
    out.summary = gateway_.complete(request).content;
    missing.clear();
    for (const auto& item : topk) {
      if (out.summary.find(item.item_id) == std::string::npos) missing.push_back(item.item_id);
    }
    if (missing.empty()) {
      out.complete = true;
      return out;
    }
    if (attempt >= config_.summary_regenerations) break;
    ++out.regenerations;
  }
  out.complete = false;
  if (trace) {
    std::string ids;
    for (const auto& id : missing) ids += " " + id;
    trace->warn("literature summary still omits item ids after regeneration:" + ids);
  }
  return out;
}

LiteratureSummary LiteratureAgent::build(const Manuscript& m, Trace* trace) {
  const auto queries = generate_queries(m, config_.num_queries, trace);
  std::vector<std::future<std::vector<LiteratureItem>>> pending;
  for (const auto& q : queries) {
    pending.push_back(std::async(std::launch::async,
                                 [this, q] { return search(q, config_.limit); }));
  }
  std::vector<LiteratureItem> pool;
  for (auto& f : pending) {
    auto items = f.get();
    pool.insert(pool.end(), items.begin(), items.end());
  }
  pool = dedup_items(std::move(pool));
  if (pool.empty()) {
    LiteratureSummary empty;
    empty.paper_id = m.paper_id;
    empty.queries = queries;
    empty.summary = "No related work was retrieved.";
    empty.complete = false;
    if (trace) trace->warn("literature search returned no candidates");
    return empty;
  }
  auto top = rank_candidates(m, pool, config_.k, trace);
  auto summary = summarize(m, top, trace);
  summary.queries = queries;
  return summary;
}

}  // namespace peerpanel::lit
