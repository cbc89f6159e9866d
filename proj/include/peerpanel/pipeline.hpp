#pragma once

#include <chrono>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "peerpanel/gateway.hpp"
#include "peerpanel/human_tasks.hpp"
#include "peerpanel/lit_agent.hpp"
#include "peerpanel/prompts.hpp"
#include "peerpanel/trace.hpp"
#include "peerpanel/types.hpp"

namespace peerpanel {

class RunStore;

/// Conditioning toggles. All false is the bare persona configuration.
struct AblationFlags {
  bool conference_instructions = false;  // CI
  bool literature = false;               // LitLLM
  bool rebuttal = false;                 // RB

  bool operator==(const AblationFlags&) const = default;
  std::string label() const;  // "phi", "CI", "CI+LitLLM+RB", ...
};

void to_json(json& j, const AblationFlags& f);
void from_json(const json& j, AblationFlags& f);

enum class AgentKind { Llm, Human };

struct StageError {
  std::string agent;
  std::string message;

  bool operator==(const StageError&) const = default;
};

struct PipelineRecord {
  std::string run_id;
  std::string paper_id;
  std::string config_hash;
  AblationFlags flags;
  std::optional<LiteratureSummary> literature;
  std::vector<ReviewReport> reviews_pre;
  std::optional<Rebuttal> rebuttal;
  std::vector<ReviewReport> reviews_post;
  std::optional<MetaReview> metareview;
  // Keyed by agent id: "literature", "reviewer:<persona>", "author",
  // "post:<persona>", "metareviewer".
  std::map<std::string, AgentKind> agent_kinds;
  std::vector<std::string> warnings;
  std::vector<StageError> errors;
  bool failed = false;

  bool operator==(const PipelineRecord&) const = default;
};

void to_json(json& j, const PipelineRecord& r);
void from_json(const json& j, PipelineRecord& r);

/// Agent ids a run may assign to people.
namespace agent_id {
inline constexpr const char* kLiterature = "literature";
inline constexpr const char* kAuthor = "author";
inline constexpr const char* kMeta = "metareviewer";
std::string reviewer(const std::string& persona);
std::string post(const std::string& persona);
}  // namespace agent_id

using HumanOverrides = std::map<std::string, AgentKind>;

struct EngineConfig {
  prompts::AgentSettings llm;
  int grounding_retries = 3;  // R
  int parse_attempts = 2;     // P
  std::string strict_grounding_instruction = prompts::kDefaultStrictGrounding;
  std::optional<std::string> reviewer_guidelines;
  std::optional<std::string> ac_guidelines;
  std::chrono::milliseconds human_timeout{std::chrono::hours(1)};
  std::size_t min_reviews = 2;
};

/// Runs the single-turn protocol: literature, persona reviews, rebuttal,
/// post-rebuttal responses, metareview. Every LLM call goes through the
/// gateway; every stage is persisted to the store (when one is attached)
/// as soon as it completes.
class ReviewEngine {
 public:
  ReviewEngine(llm::Gateway& gateway, EngineConfig config,
               lit::LiteratureAgent* literature = nullptr, RunStore* store = nullptr,
               HumanTaskQueue* tasks = nullptr);

  ReviewReport run_reviewer(const Manuscript& m, const PersonaConfig& persona,
                            const AblationFlags& flags, const LiteratureSummary* lit,
                            const std::optional<std::string>& guidelines,
                            Trace* trace = nullptr);

  Rebuttal run_author(const Manuscript& m, const std::vector<ReviewReport>& reviews,
                      const LiteratureSummary* lit, const std::string& config_id,
                      Trace* trace = nullptr);

  ReviewReport run_post_rebuttal(const ReviewReport& report, const Rebuttal& rebuttal,
                                 const PersonaConfig& persona, const AblationFlags& flags,
                                 Trace* trace = nullptr);

  MetaReview run_metareview(const std::vector<ReviewReport>& reviews_pre,
                            const Rebuttal* rebuttal,
                            const std::vector<ReviewReport>& reviews_post,
                            const Manuscript& m, const LiteratureSummary* lit,
                            const std::optional<std::string>& ac_guidelines,
                            Trace* trace = nullptr);

  PipelineRecord run_pipeline(const std::string& run_id, const Manuscript& m,
                              const std::vector<PersonaConfig>& panel,
                              const AblationFlags& flags,
                              const HumanOverrides& overrides = {});

  /// Hash of everything that changes agent behaviour for a run.
  std::string config_hash(const std::vector<PersonaConfig>& panel,
                          const AblationFlags& flags) const;

  const EngineConfig& config() const { return config_; }

 private:
  template <typename T, typename Parse>
  T ask(llm::ChatRequest request, const std::string& label, Trace* trace, Parse parse,
        const std::string& retry_hint);

  json await_human(const std::string& run_id, const std::string& paper_id,
                   const std::string& agent, const std::string& stage, json context);

  llm::Gateway& gateway_;
  EngineConfig config_;
  lit::LiteratureAgent* literature_;
  RunStore* store_;
  HumanTaskQueue* tasks_;
};

}  // namespace peerpanel
