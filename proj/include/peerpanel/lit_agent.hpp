#pragma once

#include <string>
#include <vector>

#include "peerpanel/gateway.hpp"
#include "peerpanel/prompts.hpp"
#include "peerpanel/search.hpp"
#include "peerpanel/trace.hpp"
#include "peerpanel/types.hpp"

namespace peerpanel::lit {

struct LitAgentConfig {
  prompts::AgentSettings llm;
  int num_queries = 3;
  int limit = 20;  // per query
  int k = 8;
  int summary_regenerations = 2;
};

/// Query generation -> search -> relevance ranking -> summary. Ranking is a
/// single LLM scoring pass with deterministic tie-breaks; a debate-style
/// ranker can replace rank_candidates without touching the rest.
class LiteratureAgent {
 public:
  LiteratureAgent(llm::Gateway& gateway, SearchClient& search, LitAgentConfig config = {});

  std::vector<std::string> generate_queries(const Manuscript& m, int n, Trace* trace = nullptr);
  std::vector<LiteratureItem> search(const std::string& query, int limit);
  std::vector<LiteratureItem> rank_candidates(const Manuscript& m,
                                              const std::vector<LiteratureItem>& candidates,
                                              int k, Trace* trace = nullptr);
  LiteratureSummary summarize(const Manuscript& m, const std::vector<LiteratureItem>& topk,
                              Trace* trace = nullptr);

  /// Full pass with the configured n, limit and k.
  LiteratureSummary build(const Manuscript& m, Trace* trace = nullptr);

 private:
  llm::Gateway& gateway_;
  SearchClient& search_;
  LitAgentConfig config_;
};

/// Parses one-query-per-line output: strips bullets, numbering and quotes,
/// drops blanks and case-insensitive duplicates.
std::vector<std::string> parse_query_lines(const std::string& reply);

/// Parses {"scores": {...}} or "id: score" lines. Scores are clamped to [0, 10].
std::map<std::string, double> parse_scores(const std::string& reply);

}  // namespace peerpanel::lit
