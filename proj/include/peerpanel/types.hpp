#pragma once

#include <array>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "peerpanel/labels.hpp"

namespace peerpanel {

using json = nlohmann::json;

enum class SourceStatus { Active, Withdrawn };

struct Manuscript {
  std::string paper_id;
  std::string title;
  std::string body;
  std::optional<DecisionLabel> ground_truth;
  std::optional<double> avg_reviewer_score;
  SourceStatus source_status = SourceStatus::Active;

  bool operator==(const Manuscript&) const = default;
};

enum class PersonaCategory { Stance, Epistemic, Stylized, Meta };

struct PersonaConfig {
  std::string name;
  PersonaCategory category = PersonaCategory::Stance;
  std::string system_prompt;
  std::string description;

  bool operator==(const PersonaConfig&) const = default;
};

enum class GroundingSource { ManuscriptSpan, LiteratureItem };

struct GroundingRef {
  GroundingSource source = GroundingSource::ManuscriptSpan;
  std::string locator;
  std::string quote;

  bool operator==(const GroundingRef&) const = default;
};

enum class ReviewStage { PreRebuttal, PostRebuttal };

enum class Axis {
  Novelty,
  Soundness,
  ExperimentalValidity,
  ResultsDiscussion,
  OrganizationPresentation,
  Impact,
};

inline constexpr std::array<Axis, 6> kAllAxes = {
    Axis::Novelty,           Axis::Soundness,
    Axis::ExperimentalValidity, Axis::ResultsDiscussion,
    Axis::OrganizationPresentation, Axis::Impact};

struct AxisAssessment {
  std::string text;
  std::vector<GroundingRef> grounding;

  bool operator==(const AxisAssessment&) const = default;
};

struct ReviewReport {
  std::string persona;
  std::string paper_id;
  ReviewStage stage = ReviewStage::PreRebuttal;
  std::string summary;
  std::vector<std::string> strengths;
  std::vector<std::string> weaknesses;
  std::map<Axis, AxisAssessment> axes;
  DecisionLabel recommendation = DecisionLabel::Reject;
  bool grounded = false;
  // Number of stricter-grounding reruns that were issued.
  int retry_count = 0;
  // Short post-rebuttal response; empty for pre-rebuttal reports.
  std::string response;

  bool operator==(const ReviewReport&) const = default;
};

enum class ClaimKind { ReviewerClaim, LiteratureItem };

struct CitedClaim {
  ClaimKind kind = ClaimKind::ReviewerClaim;
  // Verbatim reviewer quote, or a literature item id.
  std::string value;

  bool operator==(const CitedClaim&) const = default;
};

struct Rebuttal {
  std::string paper_id;
  std::string config_id;
  std::string text;
  std::vector<CitedClaim> cited_claims;
  int regenerations = 0;
  // Set when citations still failed verification after regeneration.
  bool flagged = false;

  bool operator==(const Rebuttal&) const = default;
};

enum class FactVerdict { SupportedManuscript, SupportedLiterature, Unsupported };

struct FactRecord {
  std::string claim;
  std::string source_persona;
  std::string quote;
  FactVerdict verdict = FactVerdict::Unsupported;
  double significance = 0.0;

  bool operator==(const FactRecord&) const = default;
};

struct MetaSections {
  std::string stance_summary;
  std::string common_strengths_weaknesses;
  std::string rebuttal_effectiveness;
  std::string stance_shifts;
  std::string lingering_concerns;

  bool operator==(const MetaSections&) const = default;
  bool complete() const;
};

struct MetaReview {
  MetaSections sections;
  std::vector<FactRecord> facts;
  DecisionLabel decision = DecisionLabel::Reject;

  bool operator==(const MetaReview&) const = default;
};

struct LiteratureItem {
  std::string item_id;
  std::string title;
  std::string abstract;
  int year = 0;
  std::optional<std::string> venue;

  bool operator==(const LiteratureItem&) const = default;
};

struct LiteratureSummary {
  std::string paper_id;
  std::vector<std::string> queries;
  std::vector<LiteratureItem> ranked_items;
  std::string summary;
  // False when the summary still omitted item ids after regeneration.
  bool complete = true;
  int regenerations = 0;

  bool operator==(const LiteratureSummary&) const = default;
};

// Enum spellings used by the record format.
std::string_view to_string(SourceStatus v) noexcept;
std::string_view to_string(PersonaCategory v) noexcept;
std::string_view to_string(GroundingSource v) noexcept;
std::string_view to_string(ReviewStage v) noexcept;
std::string_view to_string(Axis v) noexcept;
std::string_view to_string(ClaimKind v) noexcept;
std::string_view to_string(FactVerdict v) noexcept;

std::optional<Axis> parse_axis(std::string_view s) noexcept;

// Record format (JSON). from_json throws SchemaError on any violation.
void to_json(json& j, DecisionLabel v);
void from_json(const json& j, DecisionLabel& v);
void to_json(json& j, const Manuscript& v);
void from_json(const json& j, Manuscript& v);
void to_json(json& j, const PersonaConfig& v);
void from_json(const json& j, PersonaConfig& v);
void to_json(json& j, const GroundingRef& v);
void from_json(const json& j, GroundingRef& v);
void to_json(json& j, const AxisAssessment& v);
void from_json(const json& j, AxisAssessment& v);
void to_json(json& j, const ReviewReport& v);
void from_json(const json& j, ReviewReport& v);
void to_json(json& j, const CitedClaim& v);
void from_json(const json& j, CitedClaim& v);
void to_json(json& j, const Rebuttal& v);
void from_json(const json& j, Rebuttal& v);
void to_json(json& j, const FactRecord& v);
void from_json(const json& j, FactRecord& v);
void to_json(json& j, const MetaSections& v);
void from_json(const json& j, MetaSections& v);
void to_json(json& j, const MetaReview& v);
void from_json(const json& j, MetaReview& v);
void to_json(json& j, const LiteratureItem& v);
void from_json(const json& j, LiteratureItem& v);
void to_json(json& j, const LiteratureSummary& v);
void from_json(const json& j, LiteratureSummary& v);

/// Renders a review as plain markdown-ish prose (used in prompts and arena).
std::string render_review(const ReviewReport& r);
std::string render_metareview(const MetaReview& m);

}  // namespace peerpanel
