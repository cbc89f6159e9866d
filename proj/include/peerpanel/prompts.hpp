#pragma once

#include <optional>
#include <string>
#include <vector>

#include "peerpanel/gateway.hpp"
#include "peerpanel/types.hpp"

// Prompt text for every agent. The first line of each user message is a
// "Task: <name>" marker so offline scripts can route replies by task.
namespace peerpanel::prompts {

struct AgentSettings {
  std::string model = "gpt-oss-120b";
  double temperature = 0.0;
  int max_tokens = 4096;
};

llm::ChatRequest make_request(const AgentSettings& settings, std::string system,
                              std::string user);

inline constexpr const char* kDefaultStrictGrounding =
    "Your previous review contained judgments that could not be traced to the "
    "manuscript or the literature. Every axis must now carry at least one "
    "quote copied character for character from the manuscript text or from a "
    "listed literature item. Do not paraphrase inside quotes.";

std::string manuscript_block(const Manuscript& m);
std::string literature_block(const LiteratureSummary& lit);

std::string query_generation(const Manuscript& m, int n);
std::string relevance_scoring(const Manuscript& m, const std::vector<LiteratureItem>& items);
std::string literature_summary(const Manuscript& m, const std::vector<LiteratureItem>& items,
                               const std::vector<std::string>& missing_ids);

/// Reviewer user message. `guidelines` and `lit` are included only when set;
/// the caller decides based on the ablation flags.
std::string reviewer_report(const Manuscript& m, const std::optional<std::string>& guidelines,
                            const LiteratureSummary* lit);
std::string strict_grounding_system(const std::string& persona_prompt,
                                    const std::string& instruction, int attempt,
                                    const std::vector<GroundingRef>& unresolved);
std::string parse_retry(const std::string& reason);

std::string author_rebuttal(const Manuscript& m, const std::vector<ReviewReport>& reviews,
                            const LiteratureSummary* lit,
                            const std::vector<std::string>& invalid_citations);
std::string post_rebuttal_response(const ReviewReport& review, const Rebuttal& rebuttal);

std::string fact_extraction(const Manuscript& m, const std::vector<ReviewReport>& reviews);
std::string metareview(const Manuscript& m, const std::vector<ReviewReport>& reviews_pre,
                       const Rebuttal* rebuttal, const std::vector<ReviewReport>& reviews_post,
                       const std::vector<FactRecord>& verified_facts,
                       const std::optional<std::string>& ac_guidelines,
                       const LiteratureSummary* lit);

std::string judge_system();
std::string judge_user(const std::string& paper_context, const std::string& left,
                       const std::string& right);

}  // namespace peerpanel::prompts
