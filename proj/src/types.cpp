#include "peerpanel/types.hpp"

#include <sstream>

#include "peerpanel/errors.hpp"

namespace peerpanel {

namespace {

template <typename T>
T required(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) {
    throw SchemaError(std::string("missing field '") + key + "'");
  }
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw SchemaError(std::string("field '") + key + "': " + e.what());
  }
}

template <typename T>
T optional_or(const json& j, const char* key, T fallback) {
  if (!j.is_object() || !j.contains(key) || j.at(key).is_null()) {
    return fallback;
  }
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw SchemaError(std::string("field '") + key + "': " + e.what());
  }
}

// Enum <-> string table lookup shared by every record enum.
template <typename E, std::size_t N>
E enum_from(const json& j, const std::array<std::pair<E, const char*>, N>& table,
            const char* what) {
  if (!j.is_string()) throw SchemaError(std::string(what) + " must be a string");
  const auto s = j.get<std::string>();
  for (const auto& [value, name] : table) {
    if (s == name) return value;
  }
  throw SchemaError(std::string("unknown ") + what + " '" + s + "'");
}

template <typename E, std::size_t N>
std::string_view enum_name(E v, const std::array<std::pair<E, const char*>, N>& table) {
  for (const auto& [value, name] : table) {
    if (value == v) return name;
  }
  return table.front().second;
}

constexpr std::array<std::pair<SourceStatus, const char*>, 2> kStatus{{
    {SourceStatus::Active, "active"}, {SourceStatus::Withdrawn, "withdrawn"}}};
constexpr std::array<std::pair<PersonaCategory, const char*>, 4> kCategory{{
    {PersonaCategory::Stance, "stance"},
    {PersonaCategory::Epistemic, "epistemic"},
    {PersonaCategory::Stylized, "stylized"},
    {PersonaCategory::Meta, "meta"}}};
constexpr std::array<std::pair<GroundingSource, const char*>, 2> kSource{{
    {GroundingSource::ManuscriptSpan, "manuscript_span"},
    {GroundingSource::LiteratureItem, "literature_item"}}};
constexpr std::array<std::pair<ReviewStage, const char*>, 2> kStage{{
    {ReviewStage::PreRebuttal, "pre_rebuttal"},
    {ReviewStage::PostRebuttal, "post_rebuttal"}}};
constexpr std::array<std::pair<Axis, const char*>, 6> kAxis{{
    {Axis::Novelty, "novelty"},
    {Axis::Soundness, "soundness"},
    {Axis::ExperimentalValidity, "experimental_validity"},
    {Axis::ResultsDiscussion, "results_discussion"},
    {Axis::OrganizationPresentation, "organization_presentation"},
    {Axis::Impact, "impact"}}};
constexpr std::array<std::pair<ClaimKind, const char*>, 2> kClaim{{
    {ClaimKind::ReviewerClaim, "reviewer_claim"},
    {ClaimKind::LiteratureItem, "literature_item"}}};
constexpr std::array<std::pair<FactVerdict, const char*>, 3> kVerdict{{
    {FactVerdict::SupportedManuscript, "supported_manuscript"},
    {FactVerdict::SupportedLiterature, "supported_literature"},
    {FactVerdict::Unsupported, "unsupported"}}};

}  // namespace

std::string_view to_string(SourceStatus v) noexcept { return enum_name(v, kStatus); }
std::string_view to_string(PersonaCategory v) noexcept { return enum_name(v, kCategory); }
std::string_view to_string(GroundingSource v) noexcept { return enum_name(v, kSource); }
std::string_view to_string(ReviewStage v) noexcept { return enum_name(v, kStage); }
std::string_view to_string(Axis v) noexcept { return enum_name(v, kAxis); }
std::string_view to_string(ClaimKind v) noexcept { return enum_name(v, kClaim); }
std::string_view to_string(FactVerdict v) noexcept { return enum_name(v, kVerdict); }

std::optional<Axis> parse_axis(std::string_view s) noexcept {
  for (const auto& [value, name] : kAxis) {
    if (s == name) return value;
  }
  return std::nullopt;
}

bool MetaSections::complete() const {
  return !stance_summary.empty() && !common_strengths_weaknesses.empty() &&
         !rebuttal_effectiveness.empty() && !stance_shifts.empty() &&
         !lingering_concerns.empty();
}

void to_json(json& j, DecisionLabel v) { j = std::string(to_string(v)); }

void from_json(const json& j, DecisionLabel& v) {
  if (!j.is_string()) throw SchemaError("decision label must be a string");
  const auto s = j.get<std::string>();
  for (auto label : kAllLabels) {
    if (s == to_string(label)) {
      v = label;
      return;
    }
  }
  throw SchemaError("unknown decision label '" + s + "'");
}

void to_json(json& j, const Manuscript& v) {
  j = json{{"paper_id", v.paper_id},
           {"title", v.title},
           {"body", v.body},
           {"ground_truth", nullptr},
           {"avg_reviewer_score", nullptr},
           {"source_status", to_string(v.source_status)}};
  if (v.ground_truth) j["ground_truth"] = *v.ground_truth;
  if (v.avg_reviewer_score) j["avg_reviewer_score"] = *v.avg_reviewer_score;
}

void from_json(const json& j, Manuscript& v) {
  v.paper_id = required<std::string>(j, "paper_id");
  v.title = optional_or<std::string>(j, "title", "");
  v.body = optional_or<std::string>(j, "body", "");
  v.ground_truth.reset();
  if (j.contains("ground_truth") && !j.at("ground_truth").is_null()) {
    v.ground_truth = j.at("ground_truth").get<DecisionLabel>();
  }
  v.avg_reviewer_score.reset();
  if (j.contains("avg_reviewer_score") && !j.at("avg_reviewer_score").is_null()) {
    v.avg_reviewer_score = required<double>(j, "avg_reviewer_score");
  }
  v.source_status = j.contains("source_status")
                        ? enum_from(j.at("source_status"), kStatus, "source_status")
                        : SourceStatus::Active;
}

void to_json(json& j, const PersonaConfig& v) {
  j = json{{"name", v.name},
           {"category", to_string(v.category)},
           {"system_prompt", v.system_prompt},
           {"description", v.description}};
}

void from_json(const json& j, PersonaConfig& v) {
  v.name = required<std::string>(j, "name");
  v.category = enum_from(required<json>(j, "category"), kCategory, "category");
  v.system_prompt = required<std::string>(j, "system_prompt");
  v.description = optional_or<std::string>(j, "description", "");
}

void to_json(json& j, const GroundingRef& v) {
  j = json{{"source", to_string(v.source)}, {"locator", v.locator}, {"quote", v.quote}};
}

void from_json(const json& j, GroundingRef& v) {
  v.source = j.contains("source")
                 ? enum_from(j.at("source"), kSource, "grounding source")
                 : GroundingSource::ManuscriptSpan;
  v.locator = optional_or<std::string>(j, "locator", "");
  v.quote = required<std::string>(j, "quote");
  if (v.quote.empty()) throw SchemaError("grounding quote must be non-empty");
}

void to_json(json& j, const AxisAssessment& v) {
  j = json{{"text", v.text}, {"grounding", v.grounding}};
}

void from_json(const json& j, AxisAssessment& v) {
  v.text = required<std::string>(j, "text");
  v.grounding = optional_or<std::vector<GroundingRef>>(j, "grounding", {});
}

void to_json(json& j, const ReviewReport& v) {
  json axes = json::object();
  for (const auto& [axis, assessment] : v.axes) {
    axes[std::string(to_string(axis))] = assessment;
  }
  j = json{{"persona", v.persona},
           {"paper_id", v.paper_id},
           {"stage", to_string(v.stage)},
           {"summary", v.summary},
           {"strengths", v.strengths},
           {"weaknesses", v.weaknesses},
           {"axes", std::move(axes)},
           {"recommendation", v.recommendation},
           {"grounded", v.grounded},
           {"retry_count", v.retry_count},
           {"response", v.response}};
}

void from_json(const json& j, ReviewReport& v) {
  v.persona = required<std::string>(j, "persona");
  v.paper_id = required<std::string>(j, "paper_id");
  v.stage = enum_from(required<json>(j, "stage"), kStage, "stage");
  v.summary = required<std::string>(j, "summary");
  v.strengths = optional_or<std::vector<std::string>>(j, "strengths", {});
  v.weaknesses = optional_or<std::vector<std::string>>(j, "weaknesses", {});
  const auto axes = required<json>(j, "axes");
  if (!axes.is_object()) throw SchemaError("axes must be an object");
  v.axes.clear();
  for (auto it = axes.begin(); it != axes.end(); ++it) {
    const auto axis = parse_axis(it.key());
    if (!axis) throw SchemaError("unknown axis '" + it.key() + "'");
    v.axes[*axis] = it.value().get<AxisAssessment>();
  }
  for (auto axis : kAllAxes) {
    if (!v.axes.contains(axis)) {
      throw SchemaError("missing axis '" + std::string(to_string(axis)) + "'");
    }
  }
  v.recommendation = required<json>(j, "recommendation").get<DecisionLabel>();
  v.grounded = optional_or<bool>(j, "grounded", false);
  v.retry_count = optional_or<int>(j, "retry_count", 0);
  v.response = optional_or<std::string>(j, "response", "");
}

void to_json(json& j, const CitedClaim& v) {
  j = json{{"kind", to_string(v.kind)}, {"value", v.value}};
}

void from_json(const json& j, CitedClaim& v) {
  v.kind = enum_from(required<json>(j, "kind"), kClaim, "claim kind");
  v.value = required<std::string>(j, "value");
}

void to_json(json& j, const Rebuttal& v) {
  j = json{{"paper_id", v.paper_id},         {"config_id", v.config_id},
           {"text", v.text},                 {"cited_claims", v.cited_claims},
           {"regenerations", v.regenerations}, {"flagged", v.flagged}};
}

void from_json(const json& j, Rebuttal& v) {
  v.paper_id = required<std::string>(j, "paper_id");
  v.config_id = optional_or<std::string>(j, "config_id", "");
  v.text = required<std::string>(j, "text");
  v.cited_claims = required<std::vector<CitedClaim>>(j, "cited_claims");
  if (v.cited_claims.empty()) throw SchemaError("cited_claims must be non-empty");
  v.regenerations = optional_or<int>(j, "regenerations", 0);
  v.flagged = optional_or<bool>(j, "flagged", false);
}

void to_json(json& j, const FactRecord& v) {
  j = json{{"claim", v.claim},
           {"source_persona", v.source_persona},
           {"quote", v.quote},
           {"verdict", to_string(v.verdict)},
           {"significance", v.significance}};
}

void from_json(const json& j, FactRecord& v) {
  v.claim = required<std::string>(j, "claim");
  v.source_persona = optional_or<std::string>(j, "source_persona", "");
  v.quote = optional_or<std::string>(j, "quote", "");
  v.verdict = enum_from(required<json>(j, "verdict"), kVerdict, "verdict");
  v.significance = required<double>(j, "significance");
  if (!(v.significance >= 0.0 && v.significance <= 1.0)) {
    throw SchemaError("significance outside [0,1]");
  }
}

void to_json(json& j, const MetaSections& v) {
  j = json{{"stance_summary", v.stance_summary},
           {"common_strengths_weaknesses", v.common_strengths_weaknesses},
           {"rebuttal_effectiveness", v.rebuttal_effectiveness},
           {"stance_shifts", v.stance_shifts},
           {"lingering_concerns", v.lingering_concerns}};
}

void from_json(const json& j, MetaSections& v) {
  v.stance_summary = required<std::string>(j, "stance_summary");
  v.common_strengths_weaknesses = required<std::string>(j, "common_strengths_weaknesses");
  v.rebuttal_effectiveness = required<std::string>(j, "rebuttal_effectiveness");
  v.stance_shifts = required<std::string>(j, "stance_shifts");
  v.lingering_concerns = required<std::string>(j, "lingering_concerns");
}

void to_json(json& j, const MetaReview& v) {
  j = json{{"sections", v.sections}, {"facts", v.facts}, {"decision", v.decision}};
}

void from_json(const json& j, MetaReview& v) {
  v.sections = required<json>(j, "sections").get<MetaSections>();
  if (!v.sections.complete()) throw SchemaError("metareview sections must be non-empty");
  v.facts = optional_or<std::vector<FactRecord>>(j, "facts", {});
  v.decision = required<json>(j, "decision").get<DecisionLabel>();
}

void to_json(json& j, const LiteratureItem& v) {
  j = json{{"item_id", v.item_id}, {"title", v.title}, {"abstract", v.abstract},
           {"year", v.year},       {"venue", nullptr}};
  if (v.venue) j["venue"] = *v.venue;
}

void from_json(const json& j, LiteratureItem& v) {
  v.item_id = required<std::string>(j, "item_id");
  v.title = optional_or<std::string>(j, "title", "");
  v.abstract = optional_or<std::string>(j, "abstract", "");
  v.year = optional_or<int>(j, "year", 0);
  v.venue.reset();
  if (j.contains("venue") && !j.at("venue").is_null()) {
    v.venue = required<std::string>(j, "venue");
  }
}

void to_json(json& j, const LiteratureSummary& v) {
  j = json{{"paper_id", v.paper_id},       {"queries", v.queries},
           {"ranked_items", v.ranked_items}, {"summary", v.summary},
           {"complete", v.complete},       {"regenerations", v.regenerations}};
}

void from_json(const json& j, LiteratureSummary& v) {
  v.paper_id = required<std::string>(j, "paper_id");
  v.queries = optional_or<std::vector<std::string>>(j, "queries", {});
  v.ranked_items = required<std::vector<LiteratureItem>>(j, "ranked_items");
  v.summary = required<std::string>(j, "summary");
  v.complete = optional_or<bool>(j, "complete", true);
  v.regenerations = optional_or<int>(j, "regenerations", 0);
}

std::string render_review(const ReviewReport& r) {
  std::ostringstream out;
  out << "## Summary\n" << r.summary << "\n\n## Strengths\n";
  for (const auto& s : r.strengths) out << "- " << s << "\n";
  out << "\n## Weaknesses\n";
  for (const auto& w : r.weaknesses) out << "- " << w << "\n";
  for (const auto& [axis, assessment] : r.axes) {
    out << "\n## " << to_string(axis) << "\n" << assessment.text << "\n";
    for (const auto& g : assessment.grounding) {
      out << "> " << g.quote << "\n";
    }
  }
  if (!r.response.empty()) out << "\n## Post-rebuttal response\n" << r.response << "\n";
  out << "\n## Recommendation\n" << display_name(r.recommendation) << "\n";
  return out.str();
}

std::string render_metareview(const MetaReview& m) {
  std::ostringstream out;
  out << "## Reviewer stances\n" << m.sections.stance_summary << "\n\n"
      << "## Common strengths and weaknesses\n" << m.sections.common_strengths_weaknesses
      << "\n\n## Rebuttal effectiveness\n" << m.sections.rebuttal_effectiveness
      << "\n\n## Stance shifts\n" << m.sections.stance_shifts
      << "\n\n## Lingering concerns\n" << m.sections.lingering_concerns << "\n";
  out << "\n## Decision\n" << display_name(m.decision) << "\n";
  return out.str();
}

}  // namespace peerpanel
