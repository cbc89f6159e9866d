#include <doctest.h>

#include <filesystem>
#include <set>

#include "peerpanel/config.hpp"
#include "peerpanel/errors.hpp"
#include "peerpanel/fsutil.hpp"
#include "peerpanel/grounding.hpp"
#include "peerpanel/labels.hpp"
#include "peerpanel/personas.hpp"
#include "peerpanel/replies.hpp"
#include "peerpanel/text.hpp"
#include "peerpanel/types.hpp"
#include "support/world.hpp"

using namespace peerpanel;
namespace fs = std::filesystem;

TEST_CASE("labels: ordinal order, binary collapse, names") {
  CHECK(ordinal(DecisionLabel::DeskReject) == 0);
  CHECK(ordinal(DecisionLabel::AcceptOral) == 4);
  for (auto l : kAllLabels) {
    CHECK(from_ordinal(ordinal(l)) == l);
    CHECK(parse_label(to_string(l)) == l);
    CHECK(parse_label(display_name(l)) == l);
  }
  CHECK(to_binary(DecisionLabel::DeskReject) == BinaryDecision::Reject);
  CHECK(to_binary(DecisionLabel::Reject) == BinaryDecision::Reject);
  CHECK(to_binary(DecisionLabel::AcceptPoster) == BinaryDecision::Accept);
  CHECK(to_binary(DecisionLabel::AcceptOral) == BinaryDecision::Accept);
  CHECK_THROWS_AS(from_ordinal(5), std::out_of_range);
}

TEST_CASE("labels: lenient parsing") {
  CHECK(parse_label("Accept (Oral)") == DecisionLabel::AcceptOral);
  CHECK(parse_label("  accept-spotlight ") == DecisionLabel::AcceptSpotlight);
  CHECK(parse_label("Desk Rejected") == DecisionLabel::DeskReject);
  CHECK(parse_label("reject") == DecisionLabel::Reject);
  CHECK_FALSE(parse_label("accept").has_value());
  CHECK_FALSE(parse_label("maybe").has_value());
}

TEST_CASE("text: JSON extraction prefers fenced blocks, then balanced braces") {
  auto j = text::extract_json_object("noise {\"a\": 1} ```json\n{\"b\": \"}\"}\n```");
  REQUIRE(j);
  CHECK(j->contains("b"));
  j = text::extract_json_object("prefix {\"x\": \"{not a brace}\", \"y\": [1]} tail");
  REQUIRE(j);
  CHECK(j->at("y").size() == 1);
  CHECK_FALSE(text::extract_json_object("no json here").has_value());
}

TEST_CASE("text: normalized containment") {
  CHECK(text::contains_normalized("The  Quick\nbrown fox", "quick brown"));
  CHECK_FALSE(text::contains_normalized("abc", ""));
  CHECK_FALSE(text::contains_normalized("abc", "abd"));
}

TEST_CASE("fsutil: sha256 known vector and atomic write") {
  CHECK(sha256_hex("abc") ==
        "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
  const auto dir = fs::temp_directory_path() / "peerpanel-core-fs";
  fs::remove_all(dir);
  write_file_atomic(dir / "a" / "b.txt", "hello");
  CHECK(read_file(dir / "a" / "b.txt") == "hello");
  CHECK_THROWS_AS(read_file(dir / "missing"), IoError);
}

namespace {

ReviewReport sample_review() {
  ReviewReport r;
  r.persona = "theorist";
  r.paper_id = "p1";
  r.summary = "s";
  for (auto a : kAllAxes) r.axes[a] = {"t", {{GroundingSource::ManuscriptSpan, "", "quote"}}};
  r.recommendation = DecisionLabel::AcceptSpotlight;
  return r;
}

}  // namespace

TEST_CASE("types: records round-trip through JSON") {
  const auto r = sample_review();
  CHECK(json(r).get<ReviewReport>() == r);

  Rebuttal rb{"p1", "cfg", "text", {{ClaimKind::ReviewerClaim, "q"}}, 1, true};
  CHECK(json(rb).get<Rebuttal>() == rb);

  MetaReview m;
  m.sections = {"a", "b", "c", "d", "e"};
  m.facts = {{"claim", "theorist", "quote", FactVerdict::SupportedManuscript, 0.25}};
  m.decision = DecisionLabel::Reject;
  CHECK(json(m).get<MetaReview>() == m);

  LiteratureSummary lit{"p1", {"q"}, world::literature(2), "sum [lit0] [lit1]", true, 0};
  CHECK(json(lit).get<LiteratureSummary>() == lit);

  const auto ms = world::manuscript(3);
  CHECK(json(ms).get<Manuscript>() == ms);
}

TEST_CASE("types: schema violations are rejected") {
  json j = sample_review();
  j["axes"].erase("impact");
  CHECK_THROWS_AS(j.get<ReviewReport>(), SchemaError);

  j = sample_review();
  j["recommendation"] = "strong accept";
  CHECK_THROWS_AS(j.get<ReviewReport>(), SchemaError);

  j = sample_review();
  j["axes"]["novelty"]["grounding"][0]["quote"] = "";
  CHECK_THROWS_AS(j.get<ReviewReport>(), SchemaError);

  json rb = Rebuttal{"p1", "", "t", {{ClaimKind::ReviewerClaim, "q"}}, 0, false};
  rb["cited_claims"] = json::array();
  CHECK_THROWS_AS(rb.get<Rebuttal>(), SchemaError);

  json fact = FactRecord{"c", "p", "q", FactVerdict::Unsupported, 0.5};
  fact["significance"] = 1.5;
  CHECK_THROWS_AS(fact.get<FactRecord>(), SchemaError);

  MetaReview m;
  m.sections = {"a", "", "c", "d", "e"};
  CHECK_THROWS_AS(json(m).get<MetaReview>(), SchemaError);
}

TEST_CASE("personas: shipped pack") {
  const auto& pack = shipped_personas();
  CHECK(pack.size() == 14);
  CHECK(shipped_reviewers().size() == 13);
  std::set<std::string> names;
  for (const auto& p : pack) {
    names.insert(p.name);
    CHECK_FALSE(p.system_prompt.empty());
  }
  CHECK(names.size() == pack.size());
  for (const char* n : {"default", "critical", "permissive", "empiricist", "theorist",
                        "metareviewer"}) {
    CHECK(names.count(n) == 1);
  }
  CHECK_THROWS_AS(find_persona(pack, "nobody"), UnknownPersona);
}

TEST_CASE("personas: loading a pack rejects duplicates") {
  const auto path = fs::temp_directory_path() / "peerpanel-personas.json";
  json pack = json::array({PersonaConfig{"a", PersonaCategory::Stance, "p", "d"},
                           PersonaConfig{"a", PersonaCategory::Stance, "p", "d"}});
  write_file_atomic(path, pack.dump());
  CHECK_THROWS(load_persona_pack(path));
  pack.erase(1);
  write_file_atomic(path, pack.dump());
  CHECK(load_persona_pack(path).size() == 1);
}

TEST_CASE("grounding: manuscript and literature quotes") {
  const auto m = world::manuscript(1);
  LiteratureSummary lit{"p1", {}, world::literature(2), "Summary mentions routers.", true, 0};
  CHECK(resolves({GroundingSource::ManuscriptSpan, "", "gated  sparse router"}, m, nullptr));
  CHECK_FALSE(resolves({GroundingSource::ManuscriptSpan, "", "a quote that is not there"}, m, nullptr));
  CHECK(resolves({GroundingSource::LiteratureItem, "lit1", "expert routing, part 1"}, m, &lit));
  CHECK_FALSE(resolves({GroundingSource::LiteratureItem, "lit1", "expert routing"}, m, nullptr));

  auto r = sample_review();
  CHECK_FALSE(is_grounded(r, m, nullptr));
  for (auto& [axis, a] : r.axes) a.grounding = {{GroundingSource::ManuscriptSpan, "", "sparse router"}};
  CHECK(is_grounded(r, m, nullptr));
  r.axes[Axis::Impact].grounding.push_back({GroundingSource::ManuscriptSpan, "", "missing"});
  CHECK(is_grounded(r, m, nullptr));  // one resolving ref per axis suffices
  CHECK(verify_grounding(r, m, nullptr).size() == 1);

  CHECK(verify_fact_quote("half the wall-clock time", m, &lit) == FactVerdict::SupportedManuscript);
  CHECK(verify_fact_quote("Summary mentions routers", m, &lit) == FactVerdict::SupportedLiterature);
  CHECK(verify_fact_quote("invented", m, &lit) == FactVerdict::Unsupported);
}

TEST_CASE("replies: reviews") {
  json axes = json::object();
  for (auto a : kAllAxes) axes[std::string(to_string(a))] = "plain text axis";
  const auto reply = "```json\n" + json{{"summary", "s"}, {"axes", axes}}.dump() +
                     "\n```\nRecommendation: Accept (Poster)";
  const auto r = replies::parse_review(reply, "theorist", "p9");
  CHECK(r.persona == "theorist");
  CHECK(r.paper_id == "p9");
  CHECK(r.recommendation == DecisionLabel::AcceptPoster);
  CHECK(r.axes.size() == 6);

  CHECK_THROWS_AS(replies::parse_review("no json", "t", "p"), ParseFailure);
  axes.erase("novelty");
  CHECK_THROWS_AS(replies::parse_review(json{{"summary", "s"}, {"axes", axes},
                                             {"recommendation", "reject"}}.dump(), "t", "p"),
                  ParseFailure);
}

TEST_CASE("replies: post-rebuttal stance lines") {
  using replies::parse_post_rebuttal;
  CHECK(parse_post_rebuttal("ok\nmaintain: Reject", DecisionLabel::AcceptPoster).recommendation ==
        DecisionLabel::Reject);
  CHECK(parse_post_rebuttal("Thanks.\nUpgrade to Accept (Spotlight).", DecisionLabel::Reject)
            .recommendation == DecisionLabel::AcceptSpotlight);
  CHECK(parse_post_rebuttal("I maintain my score.", DecisionLabel::AcceptOral).recommendation ==
        DecisionLabel::AcceptOral);
  CHECK_THROWS_AS(parse_post_rebuttal("no stance at all", DecisionLabel::Reject), ParseFailure);
}

TEST_CASE("replies: facts and metareview") {
  const auto facts = replies::parse_facts(
      R"({"facts": [{"claim": "c", "source_persona": "x", "quote": "q", "significance": 0.4}]})");
  REQUIRE(facts.size() == 1);
  CHECK(facts[0].significance == doctest::Approx(0.4));
  CHECK_THROWS_AS(replies::parse_facts(R"({"facts": [{"claim": "c", "significance": "high"}]})"),
                  ParseFailure);

  const json sections = {{"stance_summary", "a"}, {"common_strengths_weaknesses", "b"},
                         {"rebuttal_effectiveness", "c"}, {"stance_shifts", "d"},
                         {"lingering_concerns", "e"}};
  const auto m = replies::parse_metareview(json{{"sections", sections}, {"decision", "accept_oral"}}.dump());
  CHECK(m.decision == DecisionLabel::AcceptOral);
  json partial = sections;
  partial.erase("stance_shifts");
  CHECK_THROWS_AS(replies::parse_metareview(json{{"sections", partial}, {"decision", "reject"}}.dump()),
                  ParseFailure);
}

TEST_CASE("config: parsing, overrides and validation") {
  const auto dir = fs::temp_directory_path() / "peerpanel-config";
  fs::remove_all(dir);
  write_file_atomic(dir / "guide.md", "Be rigorous.");
  const json j = {{"run_id", "r1"},
                  {"panel", {"theorist", "critical"}},
                  {"flags", "CI+RB"},
                  {"guidelines", {{"reviewer", {{"file", "guide.md"}}}, {"area_chair", "AC text"}}},
                  {"backend", {{"parallelism", 3}, {"retries", 5}, {"model", "m"}}},
                  {"caps", {{"grounding_retries", 1}, {"parse_attempts", 4}}},
                  {"corpus", "corpus.jsonl"}};
  write_file_atomic(dir / "cfg.json", j.dump());
  const auto c = load_config(dir / "cfg.json");
  CHECK(c.run_id == "r1");
  CHECK(c.flags == AblationFlags{true, false, true});
  CHECK(c.reviewer_guidelines == "Be rigorous.");
  CHECK(c.ac_guidelines == "AC text");
  CHECK(c.parallelism == 3);
  CHECK(c.corpus == dir / "corpus.jsonl");
  const auto e = engine_config(c);
  CHECK(e.grounding_retries == 1);
  CHECK(e.parse_attempts == 4);
  CHECK(e.llm.model == "m");
  CHECK(gateway_config(c, dir).retry.retries == 5);

  CHECK_THROWS_AS(parse_config({{"nonsense", 1}}), ConfigError);
  CHECK_THROWS_AS(parse_config({{"backend", {{"parallelism", "many"}}}}), ConfigError);
  CHECK_THROWS_AS(parse_config({{"flags", "CI"}}), ConfigError);  // CI without guidelines
  CHECK(parse_config(to_json(c)).panel == c.panel);
}
