#include "peerpanel/personas.hpp"

#include <fstream>
#include <set>

#include "peerpanel/errors.hpp"

namespace peerpanel {

namespace {

constexpr const char* kBaseRubric =
    "You are a reviewer for a top machine learning conference. Assess the "
    "submission along novelty, soundness, experimental validity, results and "
    "discussion, organization and presentation, and impact. Every judgment "
    "must quote the manuscript or the provided literature verbatim.";

PersonaConfig reviewer(std::string name, PersonaCategory category,
                       std::string description, std::string focus) {
  PersonaConfig p;
  p.name = std::move(name);
  p.category = category;
  p.description = std::move(description);
  p.system_prompt = std::string(kBaseRubric) + "\n\nReviewing lens: " + focus;
  return p;
}

std::vector<PersonaConfig> build_pack() {
  using C = PersonaCategory;
  std::vector<PersonaConfig> pack;
  pack.push_back(reviewer(
      "default", C::Stance, "Balanced, rubric-following reviewer",
      "Follow the conference rubric evenly. Cover soundness, novelty, impact "
      "and clarity without leaning toward acceptance or rejection."));
  pack.push_back(reviewer(
      "critical", C::Stance, "Skeptical, flaw-finding stance",
      "Be skeptical. Stress-test novelty claims, methodological rigor and the "
      "choice of baselines. Look for flaws before strengths."));
  pack.push_back(reviewer(
      "permissive", C::Stance, "Supportive lens that assumes good faith",
      "Be supportive. Highlight strengths and potential, assume good faith and "
      "prefer positive interpretations of the results."));
  pack.push_back(reviewer(
      "empiricist", C::Epistemic, "Evidence-first reviewer",
      "Scrutinize datasets, baselines, metrics and statistical validity. Ask "
      "whether the results actually support the claims."));
  pack.push_back(reviewer(
      "pragmatist", C::Epistemic, "Real-world utility",
      "Judge feasibility, scalability, deployment cost, relevance to "
      "practitioners and barriers to adoption."));
  pack.push_back(reviewer(
      "theorist", C::Epistemic, "Conceptual rigor",
      "Judge the coherence and elegance of the core ideas, logical soundness "
      "and the alignment between theory and evidence."));
  pack.push_back(reviewer(
      "pedagogical", C::Epistemic, "Communication quality",
      "Judge clarity, intuition, narrative flow, interpretability of figures "
      "and tables, and accessibility to newcomers."));
  pack.push_back(reviewer(
      "big_picture", C::Stylized, "Vision-first reviewer",
      "Weigh long-term significance and paradigm-shift potential. Favor "
      "conceptual promise over implementation details."));
  pack.push_back(reviewer(
      "reproducibility", C::Epistemic, "Replication rigor",
      "Check for missing hyperparameters, data splits, seeds and environment "
      "details. Check checklist compliance and remove ambiguity."));
  pack.push_back(reviewer(
      "impact", C::Stylized, "Foundations and representations",
      "Weigh depth, interpretability and principles that advance long-term "
      "understanding of learning systems."));
  pack.push_back(reviewer(
      "visionary", C::Stylized, "Bold paradigm shifts and learning dynamics",
      "Look for speculative but plausible mechanisms and their broader "
      "implications."));
  pack.push_back(reviewer(
      "fairness", C::Stylized, "Practical elegance and scalability",
      "Favor efficient, implementable methods backed by robust large-scale "
      "validation."));
  pack.push_back(reviewer(
      "probabilistic", C::Stylized, "Probabilistic rigor and generative modeling",
      "Judge uncertainty handling, principled inference and socially "
      "meaningful applications."));

  PersonaConfig meta;
  meta.name = "metareviewer";
  meta.category = C::Meta;
  meta.description = "Synthesis and calibration";
  meta.system_prompt =
      "You are an area chair. Aggregate the reviewers, evaluate the "
      "effectiveness of the rebuttal, extract and verify facts, assign each a "
      "significance, and produce a calibrated recommendation.";
  pack.push_back(std::move(meta));
  return pack;
}

}  // namespace

const std::vector<PersonaConfig>& shipped_personas() {
  static const std::vector<PersonaConfig> pack = build_pack();
  return pack;
}

std::vector<PersonaConfig> shipped_reviewers() {
  std::vector<PersonaConfig> out;
  for (const auto& p : shipped_personas()) {
    if (p.category != PersonaCategory::Meta) out.push_back(p);
  }
  return out;
}

const PersonaConfig& find_persona(const std::vector<PersonaConfig>& pack,
                                  std::string_view name) {
  for (const auto& p : pack) {
    if (p.name == name) return p;
  }
  throw UnknownPersona("unknown persona '" + std::string(name) + "'");
}

std::vector<PersonaConfig> load_persona_pack(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open persona pack " + path.string());
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw SchemaError("persona pack " + path.string() + ": " + e.what());
  }
  auto pack = j.get<std::vector<PersonaConfig>>();
  std::set<std::string> seen;
  for (const auto& p : pack) {
    if (!seen.insert(p.name).second) {
      throw SchemaError("duplicate persona name '" + p.name + "'");
    }
  }
  return pack;
}

}  // namespace peerpanel
