#include "peerpanel/replies.hpp"

#include <cctype>
#include <optional>

#include "peerpanel/errors.hpp"
#include "peerpanel/text.hpp"

namespace peerpanel::replies {

namespace {

json require_object(const std::string& reply) {
  auto j = text::extract_json_object(reply);
  if (!j) throw ParseFailure("no JSON object found");
  return *j;
}

std::vector<std::string> string_list(const json& j, const char* key) {
  std::vector<std::string> out;
  if (!j.contains(key)) return out;
  const auto& v = j.at(key);
  if (v.is_string()) {
    out.push_back(v.get<std::string>());
  } else if (v.is_array()) {
    for (const auto& e : v) {
      if (e.is_string()) out.push_back(e.get<std::string>());
    }
  } else {
    throw ParseFailure(std::string("'") + key + "' must be a list of strings");
  }
  return out;
}

std::string string_field(const json& j, const char* key) {
  if (!j.contains(key) || !j.at(key).is_string()) {
    throw ParseFailure(std::string("missing string field '") + key + "'");
  }
  return j.at(key).get<std::string>();
}

// Finds "<key>: <label>" on any line of free text.
std::optional<DecisionLabel> label_from_lines(const std::string& reply, std::string_view key) {
  const auto lines = text::split_lines(reply);
  for (auto it = lines.rbegin(); it != lines.rend(); ++it) {
    std::string line = text::to_lower(text::trim(*it));
    while (!line.empty() && (line.front() == '*' || line.front() == '#' || line.front() == '-')) {
      line = text::trim(line.substr(1));
    }
    if (!line.starts_with(key)) continue;
    const auto colon = line.find(':');
    if (colon == std::string::npos) continue;
    if (auto label = parse_label(text::trim(line.substr(colon + 1)))) return label;
  }
  return std::nullopt;
}

std::optional<DecisionLabel> label_field(const json& j, const char* key) {
  if (!j.contains(key) || !j.at(key).is_string()) return std::nullopt;
  return parse_label(j.at(key).get<std::string>());
}

GroundingRef parse_ref(const json& g) {
  GroundingRef ref;
  if (g.is_string()) {
    ref.quote = g.get<std::string>();
    return ref;
  }
  if (!g.is_object()) throw ParseFailure("grounding entries must be objects");
  ref.quote = g.value("quote", "");
  const std::string source = g.value("source", "manuscript_span");
  if (source == "literature_item" || source == "literature") {
    ref.source = GroundingSource::LiteratureItem;
  } else if (source == "manuscript_span" || source == "manuscript") {
    ref.source = GroundingSource::ManuscriptSpan;
  } else {
    throw ParseFailure("unknown grounding source '" + source + "'");
  }
  if (g.contains("locator") && g.at("locator").is_string()) ref.locator = g.at("locator");
  return ref;
}

}  // namespace

static ReviewReport parse_review_unguarded(const std::string& reply, const std::string& persona,
                          const std::string& paper_id) {
  const json j = require_object(reply);
  ReviewReport r;
  r.persona = persona;
  r.paper_id = paper_id;
  r.stage = ReviewStage::PreRebuttal;
  r.summary = string_field(j, "summary");
  r.strengths = string_list(j, "strengths");
  r.weaknesses = string_list(j, "weaknesses");
  if (!j.contains("axes") || !j.at("axes").is_object()) throw ParseFailure("missing 'axes' object");
  const auto& axes = j.at("axes");
  for (auto axis : kAllAxes) {
    const std::string name(to_string(axis));
    if (!axes.contains(name)) throw ParseFailure("missing axis '" + name + "'");
    const auto& a = axes.at(name);
    AxisAssessment assessment;
    if (a.is_string()) {
      assessment.text = a.get<std::string>();
    } else if (a.is_object()) {
      assessment.text = a.value("text", "");
      for (const char* key : {"grounding", "quotes"}) {
        if (!a.contains(key) || !a.at(key).is_array()) continue;
        for (const auto& g : a.at(key)) {
          auto ref = parse_ref(g);
          if (!text::trim(ref.quote).empty()) assessment.grounding.push_back(std::move(ref));
        }
      }
    } else {
      throw ParseFailure("axis '" + name + "' must be an object");
    }
    r.axes[axis] = std::move(assessment);
  }
  auto label = label_field(j, "recommendation");
  if (!label) label = label_from_lines(reply, "recommendation");
  if (!label) throw ParseFailure("missing or unrecognized recommendation");
  r.recommendation = *label;
  return r;
}

static Rebuttal parse_rebuttal_unguarded(const std::string& reply, const std::string& paper_id,
                        const std::string& config_id) {
  const json j = require_object(reply);
  Rebuttal r;
  r.paper_id = paper_id;
  r.config_id = config_id;
  r.text = string_field(j, "text");
  if (j.contains("cited_claims") && j.at("cited_claims").is_array()) {
    for (const auto& c : j.at("cited_claims")) {
      if (!c.is_object()) continue;
      CitedClaim claim;
      const std::string kind = c.value("kind", "reviewer_claim");
      if (kind == "literature_item" || kind == "literature") {
        claim.kind = ClaimKind::LiteratureItem;
        claim.value = c.contains("value") ? c.value("value", "") : c.value("item_id", "");
      } else {
        claim.kind = ClaimKind::ReviewerClaim;
        claim.value = c.contains("value") ? c.value("value", "") : c.value("quote", "");
      }
      if (!text::trim(claim.value).empty()) r.cited_claims.push_back(std::move(claim));
    }
  }
  return r;
}

static PostRebuttal parse_post_rebuttal_unguarded(const std::string& reply, DecisionLabel previous) {
  if (auto j = text::extract_json_object(reply)) {
    if (auto label = label_field(*j, "recommendation")) {
      return {j->value("response", text::trim(reply)), *label};
    }
  }
  static constexpr std::string_view kVerbs[] = {"maintain", "keep",   "upgrade",
                                                "downgrade", "revise", "change"};
  auto lines = text::split_lines(reply);
  for (std::size_t idx = lines.size(); idx-- > 0;) {
    std::string line = text::to_lower(text::trim(lines[idx]));
    while (!line.empty() && (line.front() == '*' || line.front() == '-' || line.front() == '>')) {
      line = text::trim(line.substr(1));
    }
    for (std::string_view subject : {"i ", "we "}) {
      if (line.starts_with(subject)) line = text::trim(line.substr(subject.size()));
    }
    std::string_view matched;
    for (auto verb : kVerbs) {
      if (line.starts_with(verb)) {
        matched = verb;
        break;
      }
    }
    if (matched.empty()) continue;
    std::string rest = text::trim(line.substr(matched.size()));
    // "upgrade to X", "maintain: X", "change recommendation to X"
    if (const auto to = rest.find(" to "); to != std::string::npos) {
      rest = rest.substr(to + 4);
    } else if (rest.starts_with("to ")) {
      rest = rest.substr(3);
    }
    while (!rest.empty() && (rest.front() == ':' || rest.front() == ' ')) rest.erase(0, 1);
    while (!rest.empty() && (rest.back() == '.' || rest.back() == '*')) rest.pop_back();
    std::optional<DecisionLabel> label = parse_label(rest);
    if (!label && matched != "maintain" && matched != "keep") continue;
    lines.erase(lines.begin() + static_cast<std::ptrdiff_t>(idx));
    std::string response;
    for (const auto& l : lines) response += l + "\n";
    response = text::trim(response);
    if (response.empty()) response = text::trim(reply);
    return {response, label.value_or(previous)};
  }
  throw ParseFailure("missing final 'maintain/upgrade/downgrade' recommendation line");
}

static std::vector<RawFact> parse_facts_unguarded(const std::string& reply) {
  const json j = require_object(reply);
  if (!j.contains("facts") || !j.at("facts").is_array()) throw ParseFailure("missing 'facts' list");
  std::vector<RawFact> out;
  for (const auto& f : j.at("facts")) {
    if (!f.is_object()) throw ParseFailure("facts must be objects");
    RawFact fact;
    fact.claim = string_field(f, "claim");
    fact.source_persona = f.value("source_persona", "");
    fact.quote = f.value("quote", "");
    if (!f.contains("significance") || !f.at("significance").is_number()) {
      throw ParseFailure("fact without numeric significance");
    }
    fact.significance = f.at("significance").get<double>();
    out.push_back(std::move(fact));
  }
  return out;
}

static MetaDecision parse_metareview_unguarded(const std::string& reply) {
  const json j = require_object(reply);
  const json& s = j.contains("sections") && j.at("sections").is_object() ? j.at("sections") : j;
  MetaDecision out;
  out.sections.stance_summary = s.value("stance_summary", "");
  out.sections.common_strengths_weaknesses = s.value("common_strengths_weaknesses", "");
  out.sections.rebuttal_effectiveness = s.value("rebuttal_effectiveness", "");
  out.sections.stance_shifts = s.value("stance_shifts", "");
  out.sections.lingering_concerns = s.value("lingering_concerns", "");
  if (!out.sections.complete()) throw ParseFailure("all five metareview sections are required");
  auto label = label_field(j, "decision");
  if (!label) label = label_field(j, "recommendation");
  if (!label) label = label_from_lines(reply, "decision");
  if (!label) throw ParseFailure("missing or unrecognized decision");
  out.decision = *label;
  return out;
}

ReviewReport parse_review(const std::string& reply, const std::string& persona,
                          const std::string& paper_id) {
  try {
    return parse_review_unguarded(reply, persona, paper_id);
  } catch (const json::exception& e) {
    throw ParseFailure(e.what());
  }
}

Rebuttal parse_rebuttal(const std::string& reply, const std::string& paper_id,
                        const std::string& config_id) {
  try {
    return parse_rebuttal_unguarded(reply, paper_id, config_id);
  } catch (const json::exception& e) {
    throw ParseFailure(e.what());
  }
}

PostRebuttal parse_post_rebuttal(const std::string& reply, DecisionLabel previous) {
  try {
    return parse_post_rebuttal_unguarded(reply, previous);
  } catch (const json::exception& e) {
    throw ParseFailure(e.what());
  }
}

std::vector<RawFact> parse_facts(const std::string& reply) {
  try {
    return parse_facts_unguarded(reply);
  } catch (const json::exception& e) {
    throw ParseFailure(e.what());
  }
}

MetaDecision parse_metareview(const std::string& reply) {
  try {
    return parse_metareview_unguarded(reply);
  } catch (const json::exception& e) {
    throw ParseFailure(e.what());
  }
}

}  // namespace peerpanel::replies
