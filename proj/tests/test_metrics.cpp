#include <doctest.h>

#include "peerpanel/errors.hpp"
#include "peerpanel/metrics.hpp"
#include "peerpanel/report.hpp"

using namespace peerpanel;
using L = DecisionLabel;
using B = BinaryDecision;

namespace {

ReviewReport review(const std::string& persona, const std::string& paper, L label,
                    ReviewStage stage = ReviewStage::PreRebuttal) {
  ReviewReport r;
  r.persona = persona;
  r.paper_id = paper;
  r.stage = stage;
  r.recommendation = label;
  return r;
}

PipelineRecord record(const std::string& paper, std::vector<std::pair<std::string, L>> pre,
                      L meta) {
  PipelineRecord rec;
  rec.run_id = "r";
  rec.paper_id = paper;
  for (auto& [persona, label] : pre) rec.reviews_pre.push_back(review(persona, paper, label));
  MetaReview m;
  m.decision = meta;
  rec.metareview = m;
  return rec;
}

}  // namespace

TEST_CASE("binary confusion, macro PRF, accuracy, error rates") {
  // truth: A A R R A ; pred: A R R A A
  std::vector<B> truth{B::Accept, B::Accept, B::Reject, B::Reject, B::Accept};
  std::vector<B> pred{B::Accept, B::Reject, B::Reject, B::Accept, B::Accept};
  const auto m = metrics::confusion(pred, truth);
  REQUIRE(m.size() == 2);
  CHECK(m.labels == std::vector<std::string>{"reject", "accept"});
  CHECK(m.counts == std::vector<std::vector<std::int64_t>>{{1, 1}, {1, 2}});
  CHECK(m.total() == 5);
  CHECK(metrics::accuracy(m) == doctest::Approx(0.6));
  const auto prf = metrics::macro_prf(m);
  // reject: P=1/2 R=1/2 ; accept: P=2/3 R=2/3
  CHECK(prf.precision == doctest::Approx((0.5 + 2.0 / 3) / 2));
  CHECK(prf.recall == doctest::Approx((0.5 + 2.0 / 3) / 2));
  CHECK(prf.f1 == doctest::Approx((0.5 + 2.0 / 3) / 2));
  const auto rates = metrics::binary_rates(m);
  CHECK(rates.fpr == doctest::Approx(0.5));
  CHECK(rates.fnr == doctest::Approx(1.0 / 3));
  CHECK(rates.warnings.empty());
}

TEST_CASE("five-way: absent classes score zero in the macro mean") {
  std::vector<L> truth{L::Reject, L::Reject, L::Reject};
  const auto m = metrics::confusion(truth, truth);
  CHECK(m.size() == 5);
  CHECK(metrics::accuracy(m) == 1.0);
  const auto prf = metrics::macro_prf(m);
  CHECK(prf.precision == doctest::Approx(0.2));
  CHECK(prf.recall == doctest::Approx(0.2));
  CHECK(prf.f1 == doctest::Approx(0.2));
}

TEST_CASE("collapse five-way to binary") {
  std::vector<L> truth{L::DeskReject, L::Reject, L::AcceptPoster, L::AcceptOral};
  std::vector<L> pred{L::Reject, L::AcceptSpotlight, L::AcceptOral, L::DeskReject};
  const auto b = metrics::collapse_to_binary(metrics::confusion(pred, truth));
  CHECK(b.labels == std::vector<std::string>{"reject", "accept"});
  CHECK(b.counts == std::vector<std::vector<std::int64_t>>{{1, 1}, {1, 1}});
  std::vector<B> bt;
  std::vector<B> bp;
  for (auto l : truth) bt.push_back(to_binary(l));
  for (auto l : pred) bp.push_back(to_binary(l));
  CHECK(b == metrics::confusion(bp, bt));
}

TEST_CASE("error rates with an empty class warn instead of dividing by zero") {
  std::vector<B> truth{B::Accept, B::Accept};
  std::vector<B> pred{B::Accept, B::Reject};
  const auto rates = metrics::binary_rates(metrics::confusion(pred, truth));
  CHECK(rates.fpr == 0.0);
  CHECK(rates.fnr == doctest::Approx(0.5));
  CHECK(rates.warnings.size() == 1);
}

TEST_CASE("Cohen's kappa") {
  std::vector<int> a{0, 1, 0, 1};
  std::vector<int> b{0, 1, 1, 1};
  // po = 3/4, pe = .5*.25 + .5*.75 = .5
  CHECK(metrics::cohens_kappa(a, b) == doctest::Approx(0.5));
  CHECK(metrics::cohens_kappa(a, a) == doctest::Approx(1.0));
  std::vector<int> flipped{1, 0, 1, 0};
  CHECK(metrics::cohens_kappa(a, flipped) == doctest::Approx(-1.0));
  bool degenerate = false;
  std::vector<int> constant{2, 2, 2};
  CHECK(metrics::cohens_kappa(constant, constant, &degenerate) == 1.0);
  CHECK(degenerate);
  std::vector<int> shorter{0};
  CHECK_THROWS_AS(metrics::cohens_kappa(a, shorter), LengthMismatch);
}

TEST_CASE("mismatched lengths are rejected") {
  std::vector<L> two{L::Reject, L::Reject};
  std::vector<L> one{L::Reject};
  CHECK_THROWS_AS(metrics::confusion(two, one), LengthMismatch);
}

TEST_CASE("report: predictions per persona plus ensembles") {
  std::vector<PipelineRecord> records{
      record("p1", {{"critical", L::Reject}, {"permissive", L::AcceptPoster},
                    {"theorist", L::AcceptPoster}},
             L::AcceptPoster),
      record("p2", {{"critical", L::Reject}, {"permissive", L::AcceptOral}, {"theorist", L::Reject}},
             L::Reject)};
  records[1].rebuttal = Rebuttal{};
  records[1].reviews_post.push_back(
      review("critical", "p2", L::AcceptPoster, ReviewStage::PostRebuttal));

  const auto pre = report::collect_predictions(records, report::Snapshot::PreRebuttal);
  CHECK(pre.at("critical").at("p2") == L::Reject);
  CHECK(pre.at("majority").at("p1") == L::AcceptPoster);
  CHECK(pre.at("majority").at("p2") == L::Reject);
  // p2: (1 + 4 + 1) / 3 = 2
  CHECK(pre.at("average").at("p2") == L::AcceptPoster);
  CHECK(pre.at("meta").at("p1") == L::AcceptPoster);

  const auto post = report::collect_predictions(records, report::Snapshot::PostRebuttal);
  CHECK(post.at("critical").at("p2") == L::AcceptPoster);
  CHECK(post.at("theorist").at("p2") == L::Reject);  // falls back to pre

  std::map<std::string, L> truth{{"p1", L::AcceptPoster}, {"p2", L::Reject}};
  const auto eval = report::evaluate_records("r", records, truth);
  REQUIRE(eval.snapshots.size() == 2);
  const auto& s = eval.snapshots[0];
  auto find = [&](const std::string& name) -> const report::SystemScores& {
    for (const auto& sys : s.systems) {
      if (sys.system == name) return sys;
    }
    FAIL("missing system " << name);
    throw;
  };
  CHECK(find("meta").acc5 == 1.0);
  CHECK(find("meta").n == 2);
  CHECK(find("critical").acc2 == doctest::Approx(0.5));
  CHECK(find("critical").rates.fnr == 1.0);
  REQUIRE(s.kappa_labels.back() == "ground_truth");
  CHECK(s.kappa.size() == s.kappa_labels.size());

  const auto j = report::to_json(eval);
  CHECK(j.at("snapshots")[0].at("snapshot") == "pre_rebuttal");
  CHECK(j.at("snapshots")[1].at("snapshot") == "post_rebuttal");
  const auto row = j.at("snapshots")[0].at("systems")[0];
  for (const char* key : {"system", "n", "five_way", "two_way", "fpr", "fnr",
                          "confusion_five_way", "confusion_two_way", "elo"}) {
    CHECK(row.contains(key));
  }
  const auto table = report::render_table(j, {{"meta", 1032.4}});
  CHECK(table.find("critical") != std::string::npos);
  CHECK(table.find("1032") != std::string::npos);
  CHECK(table.find("FNR") != std::string::npos);
}

TEST_CASE("report: no rebuttal means a single snapshot") {
  std::vector<PipelineRecord> records{
      record("p1", {{"critical", L::Reject}, {"theorist", L::Reject}}, L::Reject)};
  const auto eval = report::evaluate_records("r", records, {{"p1", L::Reject}});
  CHECK(eval.snapshots.size() == 1);
  // Constant raters give a degenerate kappa and a warning.
  CHECK_FALSE(eval.warnings.empty());
}
