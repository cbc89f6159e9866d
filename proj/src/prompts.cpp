#include "peerpanel/prompts.hpp"

#include <algorithm>
#include <sstream>

namespace peerpanel::prompts {

llm::ChatRequest make_request(const AgentSettings& settings, std::string system,
                              std::string user) {
  llm::ChatRequest r;
  r.model = settings.model;
  r.temperature = settings.temperature;
  r.max_tokens = settings.max_tokens;
  r.messages.push_back({llm::Role::System, std::move(system)});
  r.messages.push_back({llm::Role::User, std::move(user)});
  return r;
}

std::string manuscript_block(const Manuscript& m) {
  std::ostringstream out;
  out << "# Manuscript\nTitle: " << m.title << "\n\n" << m.body << "\n";
  return out.str();
}

std::string literature_block(const LiteratureSummary& lit) {
  std::ostringstream out;
  out << "# Literature summary\n" << lit.summary << "\n\n# Literature items\n";
  for (const auto& item : lit.ranked_items) {
    out << "- [" << item.item_id << "] " << item.title;
    if (item.year > 0) out << " (" << item.year << ")";
    out << "\n  " << item.abstract << "\n";
  }
  return out.str();
}

std::string query_generation(const Manuscript& m, int n) {
  std::ostringstream out;
  out << "Task: literature_queries\n"
      << "Write " << n << " distinct search queries for finding prior work related to "
      << "the manuscript below. Output one query per line and nothing else.\n\n"
      << manuscript_block(m);
  return out.str();
}

std::string relevance_scoring(const Manuscript& m, const std::vector<LiteratureItem>& items) {
  std::ostringstream out;
  out << "Task: literature_relevance\n"
      << "Score how relevant each candidate paper is to the manuscript, from 0 "
      << "(unrelated) to 10 (essential prior work). Reply with a fenced ```json "
      << "block of the form {\"scores\": {\"<item id>\": <score>, ...}} covering "
      << "every candidate.\n\n"
      << manuscript_block(m) << "\n# Candidates\n";
  for (const auto& item : items) {
    out << "- [" << item.item_id << "] " << item.title;
    if (item.year > 0) out << " (" << item.year << ")";
    out << "\n  " << item.abstract << "\n";
  }
  return out.str();
}

std::string literature_summary(const Manuscript& m, const std::vector<LiteratureItem>& items,
                               const std::vector<std::string>& missing_ids) {
  std::ostringstream out;
  out << "Task: literature_summary\n"
      << "Write a concise literature review situating the manuscript among the "
      << "papers below. Cite every paper by its bracketed id, e.g. [id].\n";
  if (!missing_ids.empty()) {
    out << "Your previous summary did not cite:";
    for (const auto& id : missing_ids) out << " [" << id << "]";
    out << ". Cite all of them this time.\n";
  }
  out << "\n" << manuscript_block(m) << "\n# Papers\n";
  for (const auto& item : items) {
    out << "- [" << item.item_id << "] " << item.title;
    if (item.year > 0) out << " (" << item.year << ")";
    out << "\n  " << item.abstract << "\n";
  }
  return out.str();
}

namespace {

constexpr const char* kReviewSchema =
    "Reply with a single fenced ```json block of this shape:\n"
    "{\n"
    "  \"summary\": \"...\",\n"
    "  \"strengths\": [\"...\"],\n"
    "  \"weaknesses\": [\"...\"],\n"
    "  \"axes\": {\n"
    "    \"<axis>\": {\"text\": \"...\", \"grounding\": [{\"source\": \"manuscript_span\", "
    "\"locator\": \"\", \"quote\": \"...\"}]}\n"
    "  },\n"
    "  \"recommendation\": \"accept_oral | accept_spotlight | accept_poster | reject | "
    "desk_reject\"\n"
    "}\n"
    "The axes are novelty, soundness, experimental_validity, results_discussion, "
    "organization_presentation and impact; all six are required. Each axis needs at "
    "least one quote copied verbatim from the manuscript (source \"manuscript_span\") or "
    "from a listed literature item (source \"literature_item\", locator = item id).\n";

}  // namespace

std::string reviewer_report(const Manuscript& m, const std::optional<std::string>& guidelines,
                            const LiteratureSummary* lit) {
  std::ostringstream out;
  out << "Task: reviewer_report\n"
      << "Review the manuscript below.\n\n"
      << manuscript_block(m) << "\n";
  if (guidelines) out << "# Conference reviewer guidelines\n" << *guidelines << "\n\n";
  if (lit) out << literature_block(*lit) << "\n";
  out << "# Output format\n" << kReviewSchema;
  return out.str();
}

std::string strict_grounding_system(const std::string& persona_prompt,
                                    const std::string& instruction, int attempt,
                                    const std::vector<GroundingRef>& unresolved) {
  std::ostringstream out;
  out << persona_prompt << "\n\n" << instruction << "\n(Grounding attempt " << attempt + 1
      << ".)";
  if (!unresolved.empty()) {
    out << "\nThese quotes could not be found:";
    for (const auto& g : unresolved) out << "\n- \"" << g.quote << "\"";
  }
  return out.str();
}

std::string parse_retry(const std::string& reason) {
  return "Your reply could not be parsed (" + reason +
         "). Re-emit the complete answer as one valid fenced ```json block and nothing else.";
}

std::string author_rebuttal(const Manuscript& m, const std::vector<ReviewReport>& reviews,
                            const LiteratureSummary* lit,
                            const std::vector<std::string>& invalid_citations) {
  std::ostringstream out;
  out << "Task: author_rebuttal\n"
      << "You are the authors. Write one consolidated rebuttal that addresses the most "
      << "severe criticisms, clarifies misunderstandings and, where appropriate, proposes "
      << "concrete revisions. Every point must cite either a reviewer claim (quoted "
      << "verbatim) or a literature item id.\n"
      << "Reply with a fenced ```json block: {\"text\": \"...\", \"cited_claims\": "
      << "[{\"kind\": \"reviewer_claim\", \"value\": \"<verbatim quote>\"}, {\"kind\": "
      << "\"literature_item\", \"value\": \"<item id>\"}]}\n";
  if (!invalid_citations.empty()) {
    out << "Your previous rebuttal cited claims that do not exist:";
    for (const auto& c : invalid_citations) out << "\n- \"" << c << "\"";
    out << "\nOnly cite text that appears verbatim in the reviews.\n";
  }
  out << "\n" << manuscript_block(m) << "\n";
  for (std::size_t i = 0; i < reviews.size(); ++i) {
    out << "# Review " << i + 1 << "\n" << render_review(reviews[i]) << "\n";
  }
  if (lit) out << literature_block(*lit);
  return out.str();
}

std::string post_rebuttal_response(const ReviewReport& review, const Rebuttal& rebuttal) {
  std::ostringstream out;
  out << "Task: post_rebuttal_response\n"
      << "The authors responded to your review. Write one short response (a few "
      << "sentences). End with a final line of the form \"maintain: <recommendation>\", "
      << "\"upgrade to <recommendation>\" or \"downgrade to <recommendation>\", where "
      << "<recommendation> is one of Accept (Oral), Accept (Spotlight), Accept (Poster), "
      << "Reject, Desk Reject.\n\n# Your review\n"
      << render_review(review) << "\n# Author rebuttal\n"
      << rebuttal.text << "\n";
  return out.str();
}

std::string fact_extraction(const Manuscript& m, const std::vector<ReviewReport>& reviews) {
  std::ostringstream out;
  out << "Task: fact_extraction\n"
      << "Extract the factual claims the reviewers make about the manuscript. For each "
      << "claim give the reviewer it came from, a supporting quote copied verbatim from "
      << "the manuscript or literature, and a significance in [0, 1] for how much it "
      << "should weigh on the decision.\n"
      << "Reply with a fenced ```json block: {\"facts\": [{\"claim\": \"...\", "
      << "\"source_persona\": \"...\", \"quote\": \"...\", \"significance\": 0.5}]}\n\n"
      << manuscript_block(m) << "\n";
  for (const auto& r : reviews) {
    out << "# Review by " << r.persona << "\n" << render_review(r) << "\n";
  }
  return out.str();
}

std::string metareview(const Manuscript& m, const std::vector<ReviewReport>& reviews_pre,
                       const Rebuttal* rebuttal, const std::vector<ReviewReport>& reviews_post,
                       const std::vector<FactRecord>& verified_facts,
                       const std::optional<std::string>& ac_guidelines,
                       const LiteratureSummary* lit) {
  std::ostringstream out;
  out << "Task: metareview\n"
      << "Write the metareview. Summarize reviewer stances and recommendations before "
      << "the rebuttal, identify common strengths and weaknesses, evaluate the "
      << "effectiveness of the rebuttal, track stance shifts after it, and highlight "
      << "lingering concerns. Base the decision only on the verified facts.\n"
      << "Reply with a fenced ```json block: {\"sections\": {\"stance_summary\": \"...\", "
      << "\"common_strengths_weaknesses\": \"...\", \"rebuttal_effectiveness\": \"...\", "
      << "\"stance_shifts\": \"...\", \"lingering_concerns\": \"...\"}, \"decision\": "
      << "\"accept_oral | accept_spotlight | accept_poster | reject | desk_reject\"}\n\n";
  if (ac_guidelines) out << "# Area chair guidelines\n" << *ac_guidelines << "\n\n";
  out << manuscript_block(m) << "\n";
  if (lit) out << literature_block(*lit) << "\n";
  out << "# Reviews (" << reviews_pre.size() << ")\n";
  for (const auto& r : reviews_pre) {
    out << "## Review by " << r.persona << "\n" << render_review(r) << "\n";
  }
  if (rebuttal) out << "# Author rebuttal\n" << rebuttal->text << "\n\n";
  if (!reviews_post.empty()) {
    out << "# Post-rebuttal responses\n";
    for (const auto& r : reviews_post) {
      out << "## " << r.persona << " (now " << display_name(r.recommendation) << ")\n"
          << r.response << "\n";
    }
    out << "\n";
  }
  std::vector<FactRecord> ranked = verified_facts;
  std::stable_sort(ranked.begin(), ranked.end(),
                   [](const auto& a, const auto& b) { return a.significance > b.significance; });
  out << "# Verified facts (by significance)\n";
  for (const auto& f : ranked) {
    out << "- [" << f.significance << "] " << f.claim << " (" << f.source_persona << ")\n";
  }
  return out.str();
}

std::string judge_system() {
  return "You compare two anonymous peer reviews of the same paper. Judge which review "
         "is more useful to the authors and the program committee. Do not try to infer "
         "who wrote a review, and do not let the order in which the reviews appear or "
         "their writing style sway the verdict.";
}

std::string judge_user(const std::string& paper_context, const std::string& left,
                       const std::string& right) {
  std::ostringstream out;
  out << "Task: pairwise_review_comparison\n"
      << "Compare the two reviews along five dimensions: (1) depth of engagement with "
      << "the paper's content, (2) actionability of the feedback, (3) accuracy of the "
      << "summary, (4) clarity, (5) overall helpfulness. Write one line per dimension "
      << "(\"depth: ...\", \"actionability: ...\", \"summary: ...\", \"clarity: ...\", "
      << "\"helpfulness: ...\") and finish with a line \"verdict: left\", \"verdict: "
      << "right\" or \"verdict: draw\".\n\n# Paper\n"
      << paper_context << "\n\n# Review on the left\n"
      << left << "\n\n# Review on the right\n"
      << right << "\n";
  return out.str();
}

}  // namespace peerpanel::prompts
