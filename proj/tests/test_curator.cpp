#include <doctest.h>

#include <filesystem>
#include <sstream>

#include "peerpanel/curator.hpp"
#include "peerpanel/errors.hpp"
#include "peerpanel/fsutil.hpp"

using namespace peerpanel;
using namespace peerpanel::curator;
using L = DecisionLabel;
namespace fs = std::filesystem;

namespace {

Manuscript paper(const std::string& id, L label, std::optional<double> score = std::nullopt,
                 SourceStatus status = SourceStatus::Active) {
  Manuscript m;
  m.paper_id = id;
  m.title = "t" + id;
  m.ground_truth = label;
  m.avg_reviewer_score = score;
  m.source_status = status;
  return m;
}

std::string pad(int i) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "%04d", i);
  return buf;
}

// Full-size synthetic conference: 900 posters, 1200 rejects, 600 withdrawn.
std::vector<Manuscript> conference() {
  std::vector<Manuscript> c;
  for (int i = 0; i < 20; ++i) c.push_back(paper("oral" + pad(i), L::AcceptOral, 8.0));
  for (int i = 0; i < 40; ++i) c.push_back(paper("spot" + pad(i), L::AcceptSpotlight, 7.0));
  for (int i = 0; i < 900; ++i) c.push_back(paper("post" + pad(i), L::AcceptPoster, 5.0 + i % 97 / 50.0));
  for (int i = 0; i < 1200; ++i) c.push_back(paper("rej" + pad(i), L::Reject, 2.0 + i % 89 / 30.0));
  for (int i = 0; i < 600; ++i) {
    c.push_back(paper("wd" + pad(i), L::Reject, std::nullopt, SourceStatus::Withdrawn));
  }
  for (int i = 0; i < 7; ++i) c.push_back(paper("desk" + pad(i), L::DeskReject));
  return c;
}

}  // namespace

TEST_CASE("decision strings normalize to labels") {
  CHECK(normalize_decision("Accept (Oral)").label == L::AcceptOral);
  CHECK(normalize_decision("ICLR 2025 Spotlight").label == L::AcceptSpotlight);
  CHECK(normalize_decision("Accept: poster").label == L::AcceptPoster);
  CHECK(normalize_decision("Accept: notable-top-5%").label == L::AcceptOral);
  CHECK(normalize_decision("Accept: notable-top-25%").label == L::AcceptSpotlight);
  CHECK(normalize_decision("Reject").label == L::Reject);
  CHECK(normalize_decision("Desk Rejected Submission").label == L::DeskReject);
  const auto w = normalize_decision("Withdrawn Submission");
  CHECK(w.label == L::Reject);
  CHECK(w.status == SourceStatus::Withdrawn);
  CHECK_THROWS_AS(normalize_decision("Invite to workshop"), UnknownDecision);
  CHECK_THROWS_AS(normalize_decision("Accept"), UnknownDecision);
}

TEST_CASE("OpenReview notes: v1 and v2 shapes") {
  const json v2 = {{"id", "abc"},
                   {"content",
                    {{"title", {{"value", "A Title"}}},
                     {"venue", {{"value", "ICLR 2025 Oral"}}},
                     {"abstract", {{"value", "We study things."}}}}},
                   {"ratings", {{{"value", 6}}, {{"value", 8}}}}};
  const auto r = from_openreview(v2);
  CHECK(r.at("id") == "abc");
  CHECK(r.at("title") == "A Title");
  CHECK(r.at("decision") == "ICLR 2025 Oral");
  CHECK(r.at("body") == "We study things.");
  CHECK(r.at("avg_score").get<double>() == doctest::Approx(7.0));
  CHECK(r.at("status") == "active");

  const json v1 = {{"forum", "f1"},
                   {"content", {{"title", "Old"}, {"decision", "Withdrawn"}}},
                   {"avg_score", 3.5}};
  const auto r1 = from_openreview(v1);
  CHECK(r1.at("id") == "f1");
  CHECK(r1.at("status") == "withdrawn");
  CHECK(r1.at("avg_score") == 3.5);
}

TEST_CASE("ingest: skips unknown decisions, duplicates and junk with a log line") {
  std::istringstream in(
      R"j({"id":"a","title":"A","decision":"Accept (Poster)","avg_score":6.5,"body":"text"})j" "\n"
      R"j({"id":"b","title":"B","decision":"Withdrawn Submission"})j" "\n"
      "\n"
      R"j({"id":"c","title":"C","decision":"Invite to workshop"})j" "\n"
      R"j({"id":"a","title":"A again","decision":"Reject"})j" "\n"
      "not json\n"
      R"j({"title":"no id","decision":"Reject"})j" "\n"
      R"j({"id":"d","decision":"Reject","status":"withdrawn"})j" "\n"
      R"j({"id":"e","content":{"title":{"value":"E"},"venue":{"value":"ICLR 2024 Spotlight"}}})j" "\n");
  const auto r = ingest(in);
  REQUIRE(r.corpus.size() == 4);
  CHECK(r.corpus[0].paper_id == "a");
  CHECK(r.corpus[0].ground_truth == L::AcceptPoster);
  CHECK(r.corpus[0].avg_reviewer_score == 6.5);
  CHECK(r.corpus[0].body == "text");
  CHECK(r.corpus[1].source_status == SourceStatus::Withdrawn);
  CHECK(r.corpus[1].ground_truth == L::Reject);
  CHECK(r.corpus[2].paper_id == "d");
  CHECK(r.corpus[2].source_status == SourceStatus::Withdrawn);
  CHECK(r.corpus[3].ground_truth == L::AcceptSpotlight);
  REQUIRE(r.skipped.size() == 4);
  CHECK(r.skipped[0].find("line 4") == 0);
  CHECK(r.skipped[1].find("duplicate") != std::string::npos);
  CHECK_THROWS_AS(ingest_file("/nonexistent/dump.jsonl"), IoError);
}

TEST_CASE("thirds") {
  CHECK(third_sizes(9) == std::array<std::size_t, 3>{3, 3, 3});
  CHECK(third_sizes(10) == std::array<std::size_t, 3>{4, 3, 3});
  CHECK(third_sizes(11) == std::array<std::size_t, 3>{4, 4, 3});
  CHECK(third_sizes(0) == std::array<std::size_t, 3>{0, 0, 0});
}

TEST_CASE("stratified sample: full quotas") {
  const auto corpus = conference();
  const auto m = stratified_sample(corpus, 2025);
  const auto strata = m.stratum_counts();
  CHECK(strata.at("oral") == 20);
  CHECK(strata.at("spotlight") == 40);
  CHECK(strata.at("poster_top") == 100);
  CHECK(strata.at("poster_middle") == 100);
  CHECK(strata.at("poster_bottom") == 100);
  CHECK(strata.at("reject_top") == 167);
  CHECK(strata.at("reject_middle") == 167);
  CHECK(strata.at("reject_bottom") == 166);
  CHECK(strata.at("withdrawn") == 500);
  CHECK(strata.at("desk_reject") == 7);
  const auto labels = m.label_counts();
  CHECK(labels.at("accept_poster") == 300);
  CHECK(labels.at("reject") == 1000);
  CHECK(m.entries.size() == 20 + 40 + 300 + 500 + 500 + 7);
  CHECK(m.warnings.empty());
  // Same seed, same manifest; a different seed picks differently.
  const auto again = stratified_sample(corpus, 2025);
  CHECK(again.entries == m.entries);
  CHECK(stratified_sample(corpus, 7).entries != m.entries);

  // Posters in the top third outscore every poster in the bottom third.
  std::map<std::string, double> score;
  for (const auto& p : corpus) score[p.paper_id] = p.avg_reviewer_score.value_or(0);
  double top_min = 1e9;
  double bottom_max = -1e9;
  for (const auto& e : m.entries) {
    if (e.stratum == "poster_top") top_min = std::min(top_min, score[e.paper_id]);
    if (e.stratum == "poster_bottom") bottom_max = std::max(bottom_max, score[e.paper_id]);
  }
  CHECK(top_min >= bottom_max);
}

TEST_CASE("stratified sample: short strata taken whole with a warning") {
  std::vector<Manuscript> small{paper("p1", L::AcceptPoster, 6), paper("p2", L::AcceptPoster, 5),
                                paper("r1", L::Reject, 3), paper("r2", L::Reject)};
  const auto m = stratified_sample(small, 1);
  CHECK(m.entries.size() == 4);
  bool unscored = false;
  int insufficient = 0;
  for (const auto& w : m.warnings) {
    if (w.find("without an average score") != std::string::npos) unscored = true;
    if (w.find("insufficient population") != std::string::npos) ++insufficient;
  }
  CHECK(unscored);
  CHECK(insufficient == 7);  // three poster thirds, three reject thirds, withdrawn
  // The unscored reject ranks last.
  for (const auto& e : m.entries) {
    if (e.paper_id == "r2") CHECK(e.stratum == "reject_middle");
  }
}

TEST_CASE("manifest export and read back") {
  const auto dir = fs::temp_directory_path() / "peerpanel_manifest";
  fs::remove_all(dir);
  const auto m = stratified_sample(conference(), 3);
  export_manifest(m, dir / "manifest.jsonl");
  const auto back = read_manifest(dir / "manifest.jsonl");
  CHECK(back.entries == m.entries);
  CHECK(back.warnings == m.warnings);

  const auto text = read_file(dir / "manifest.jsonl");
  const auto last = text.substr(text.rfind("{\"summary\""));
  const auto summary = json::parse(last).at("summary");
  CHECK(summary.at("total") == m.entries.size());
  CHECK(summary.at("labels").at("accept_oral") == 20);

  write_file_atomic(dir / "bad.jsonl", R"j({"paper_id":"x","label":"reject","stratum":"s"})j"
                                       "\n" R"j({"summary":{"total":5}})j" "\n");
  CHECK_THROWS_AS(read_manifest(dir / "bad.jsonl"), SchemaError);
  CHECK_THROWS_AS(export_manifest(Manifest{}, dir / "empty.jsonl"), PreconditionError);
  fs::remove_all(dir);
}
