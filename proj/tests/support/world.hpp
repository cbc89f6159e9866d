#pragma once

// Synthetic manuscripts, literature and a scripted chat backend whose
// replies are computed from the prompt, so whole pipelines run offline.

#include <algorithm>
#include <map>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "peerpanel/fsutil.hpp"
#include "peerpanel/gateway.hpp"
#include "peerpanel/search.hpp"
#include "peerpanel/text.hpp"
#include "peerpanel/types.hpp"

namespace world {

using namespace peerpanel;

inline Manuscript manuscript(int i) {
  Manuscript m;
  m.paper_id = "p" + std::to_string(i);
  m.title = "Sparse routing study number " + std::to_string(i);
  std::ostringstream body;
  body << "We introduce a gated sparse router for mixture layers, variant " << i << ".\n"
       << "On the synthetic benchmark the router improves accuracy by " << i % 7 + 1
       << ".5 points.\n"
       << "Ablations remove the gate and the load balancing loss.\n"
       << "The method trains in half the wall-clock time of the dense baseline.\n";
  m.body = body.str();
  m.ground_truth = kAllLabels[static_cast<std::size_t>(i) % kAllLabels.size()];
  m.avg_reviewer_score = 3.0 + (i % 5);
  return m;
}

inline std::vector<LiteratureItem> literature(int n) {
  std::vector<LiteratureItem> out;
  for (int i = 0; i < n; ++i) {
    LiteratureItem it;
    it.item_id = "lit" + std::to_string(i);
    it.title = "Prior work on conditional computation " + std::to_string(i);
    it.abstract = "A study of expert routing, part " + std::to_string(i) + ".";
    it.year = 2015 + i;
    out.push_back(it);
  }
  return out;
}

inline std::shared_ptr<lit::MockSearchClient> search_client(int n = 6) {
  return std::make_shared<lit::MockSearchClient>(
      std::map<std::string, std::vector<LiteratureItem>>{{"*", literature(n)}});
}

inline std::string task_of(const llm::ChatRequest& r) {
  for (const auto& m : r.messages) {
    if (m.role != llm::Role::User) continue;
    const auto& c = m.content;
    if (c.rfind("Task: ", 0) == 0) return c.substr(6, c.find('\n') - 6);
  }
  return "";
}

inline const std::string& first_user(const llm::ChatRequest& r) {
  for (const auto& m : r.messages) {
    if (m.role == llm::Role::User) return m.content;
  }
  static const std::string empty;
  return empty;
}

/// First body line of the manuscript embedded in a prompt.
inline std::string body_quote(const std::string& prompt) {
  const auto lines = text::split_lines(prompt);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (lines[i].rfind("Title: ", 0) != 0) continue;
    for (std::size_t j = i + 1; j < lines.size(); ++j) {
      if (!text::trim(lines[j]).empty()) return lines[j];
    }
  }
  return "";
}

inline std::string title_of(const std::string& prompt) {
  for (const auto& l : text::split_lines(prompt)) {
    if (l.rfind("Title: ", 0) == 0) return l.substr(7);
  }
  return "";
}

/// Bracketed ids from "- [id] ..." lines after `heading`.
inline std::vector<std::string> listed_ids(const std::string& prompt, const std::string& heading) {
  std::vector<std::string> out;
  const auto start = prompt.find(heading);
  if (start == std::string::npos) return out;
  for (const auto& l : text::split_lines(prompt.substr(start))) {
    if (l.rfind("- [", 0) == 0) out.push_back(l.substr(3, l.find(']') - 3));
  }
  return out;
}

inline unsigned small_hash(const std::string& s) {
  return static_cast<unsigned>(std::stoul(sha256_hex(s).substr(0, 6), nullptr, 16));
}

inline std::string fenced(const json& j) { return "Here you go.\n```json\n" + j.dump(2) + "\n```\n"; }

/// Label a persona gives a paper: deterministic, persona- and paper-dependent.
inline DecisionLabel scripted_label(const std::string& system_prompt, const std::string& title) {
  return kAllLabels[small_hash(system_prompt + "|" + title) % kAllLabels.size()];
}

inline std::string scripted_reply(const llm::ChatRequest& r) {
  const auto task = task_of(r);
  const auto& user = first_user(r);
  const auto quote = body_quote(user);
  const auto title = title_of(user);
  const auto& system = r.messages.front().content;

  if (task == "literature_queries") {
    return "sparse mixture of experts routing\nconditional computation gating\n"
           "load balancing loss experts\n";
  }
  if (task == "literature_relevance") {
    json scores = json::object();
    int k = 0;
    for (const auto& id : listed_ids(user, "# Candidates")) scores[id] = 9 - (k++ % 10);
    return fenced({{"scores", scores}});
  }
  if (task == "literature_summary") {
    std::string s = "Closest prior work on routing:";
    for (const auto& id : listed_ids(user, "# Papers")) s += " [" + id + "]";
    return s + ".";
  }
  if (task == "reviewer_report") {
    json axes = json::object();
    for (auto a : kAllAxes) {
      axes[std::string(to_string(a))] = {
          {"text", "Assessment of " + std::string(to_string(a)) + "."},
          {"grounding", {{{"source", "manuscript_span"}, {"locator", "body"}, {"quote", quote}}}}};
    }
    const auto label = scripted_label(system, title);
    return fenced({{"summary", "The paper proposes a gated sparse router."},
                   {"strengths", {"Clear ablations."}},
                   {"weaknesses", {"Only synthetic benchmarks."}},
                   {"axes", axes},
                   {"recommendation", to_string(label)}});
  }
  if (task == "author_rebuttal") {
    return fenced({{"text", "We thank the reviewers and add a real-data experiment."},
                   {"cited_claims", {{{"kind", "reviewer_claim"}, {"value", quote}}}}});
  }
  if (task == "post_rebuttal_response") {
    const bool upgrade = small_hash(system + user) % 3 == 0;
    return std::string("Thank you for the clarification.\n") +
           (upgrade ? "upgrade to Accept (Poster)" : "maintain: Reject");
  }
  if (task == "fact_extraction") {
    json facts = json::array();
    std::vector<std::string> personas;
    for (const auto& l : text::split_lines(user)) {
      if (l.rfind("# Review by ", 0) == 0) personas.push_back(l.substr(12));
    }
    for (std::size_t i = 0; i < personas.size(); ++i) {
      facts.push_back({{"claim", "The router improves accuracy."},
                       {"source_persona", personas[i]},
                       {"quote", quote},
                       {"significance", static_cast<double>(i + 1) / (personas.size() + 1)}});
    }
    return fenced({{"facts", facts}});
  }
  if (task == "metareview") {
    json sections = {{"stance_summary", "Reviewers were split."},
                     {"common_strengths_weaknesses", "Clear method, synthetic data only."},
                     {"rebuttal_effectiveness", "The rebuttal added a real-data run."},
                     {"stance_shifts", "Some reviewers upgraded."},
                     {"lingering_concerns", "Scale of evaluation."}};
    return fenced({{"sections", sections},
                   {"decision", to_string(kAllLabels[small_hash(title) % kAllLabels.size()])}});
  }
  if (task == "pairwise_review_comparison") return "depth: similar\nverdict: draw";
  throw MockMiss("scripted backend: unknown task '" + task + "'");
}

inline std::shared_ptr<llm::FunctionBackend> scripted_backend() {
  return std::make_shared<llm::FunctionBackend>(scripted_reply);
}

/// Gateway config that never sleeps.
inline llm::GatewayConfig fast_gateway(std::size_t parallelism = 4) {
  llm::GatewayConfig c;
  c.parallelism = parallelism;
  c.retry.sleep = [](std::chrono::milliseconds) {};
  return c;
}

}  // namespace world
