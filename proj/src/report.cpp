#include "peerpanel/report.hpp"

#include <algorithm>
#include <cstdio>
#include <set>
#include <sstream>

#include "peerpanel/ensembles.hpp"

namespace peerpanel::report {

std::string_view to_string(Snapshot s) noexcept {
  return s == Snapshot::PreRebuttal ? "pre_rebuttal" : "post_rebuttal";
}

Predictions collect_predictions(const std::vector<PipelineRecord>& records, Snapshot snapshot) {
  Predictions out;
  for (const auto& rec : records) {
    std::vector<DecisionLabel> labels;
    for (const auto& pre : rec.reviews_pre) {
      DecisionLabel label = pre.recommendation;
      if (snapshot == Snapshot::PostRebuttal) {
        for (const auto& post : rec.reviews_post) {
          if (post.persona == pre.persona) label = post.recommendation;
        }
      }
      out[pre.persona][rec.paper_id] = label;
      labels.push_back(label);
    }
    if (!labels.empty()) {
      out["majority"][rec.paper_id] = ensembles::majority_vote(labels);
      out["average"][rec.paper_id] = ensembles::average_decision(labels);
    }
    if (rec.metareview) out["meta"][rec.paper_id] = rec.metareview->decision;
  }
  return out;
}

SnapshotReport evaluate_snapshot(const Predictions& predictions,
                                 const std::map<std::string, DecisionLabel>& truth,
                                 Snapshot snapshot, std::vector<std::string>* warnings) {
  SnapshotReport out;
  out.snapshot = snapshot;
  auto note = [&](std::string w) {
    if (warnings) warnings->push_back(std::string(to_string(snapshot)) + ": " + std::move(w));
  };
  for (const auto& [system, by_paper] : predictions) {
    std::vector<DecisionLabel> p;
    std::vector<DecisionLabel> t;
    for (const auto& [paper, label] : by_paper) {
      auto it = truth.find(paper);
      if (it == truth.end()) continue;
      p.push_back(label);
      t.push_back(it->second);
    }
    if (p.empty()) {
      note(system + ": no papers with ground truth");
      continue;
    }
    SystemScores s;
    s.system = system;
    s.n = p.size();
    s.five_way = metrics::confusion(p, t);
    s.two_way = metrics::collapse_to_binary(s.five_way);
    s.prf5 = metrics::macro_prf(s.five_way);
    s.acc5 = metrics::accuracy(s.five_way);
    s.prf2 = metrics::macro_prf(s.two_way);
    s.acc2 = metrics::accuracy(s.two_way);
    s.rates = metrics::binary_rates(s.two_way);
    for (const auto& w : s.rates.warnings) note(system + ": " + w);
    out.systems.push_back(std::move(s));
  }

  std::map<std::string, std::map<std::string, DecisionLabel>> raters(predictions.begin(),
                                                                      predictions.end());
  raters["ground_truth"] = truth;
  for (const auto& [name, unused] : predictions) out.kappa_labels.push_back(name);
  out.kappa_labels.push_back("ground_truth");
  const auto k = out.kappa_labels.size();
  out.kappa.assign(k, std::vector<double>(k, 0.0));
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = 0; j < k; ++j) {
      const auto& a = raters.at(out.kappa_labels[i]);
      const auto& b = raters.at(out.kappa_labels[j]);
      std::vector<DecisionLabel> la;
      std::vector<DecisionLabel> lb;
      for (const auto& [paper, label] : a) {
        if (auto it = b.find(paper); it != b.end()) {
          la.push_back(label);
          lb.push_back(it->second);
        }
      }
      if (la.empty()) continue;
      bool degenerate = false;
      out.kappa[i][j] = metrics::cohens_kappa(la, lb, &degenerate);
      if (degenerate && i < j) {
        note("kappa(" + out.kappa_labels[i] + ", " + out.kappa_labels[j] +
                            "): both raters constant; reported as 1");
      }
    }
  }
  return out;
}

EvaluationReport evaluate_records(const std::string& run_id,
                                  const std::vector<PipelineRecord>& records,
                                  const std::map<std::string, DecisionLabel>& truth) {
  EvaluationReport out;
  out.run_id = run_id;
  out.snapshots.push_back(evaluate_snapshot(collect_predictions(records, Snapshot::PreRebuttal),
                                            truth, Snapshot::PreRebuttal, &out.warnings));
  const bool any_rebuttal = std::any_of(records.begin(), records.end(),
                                        [](const auto& r) { return r.rebuttal.has_value(); });
  if (any_rebuttal) {
    out.snapshots.push_back(
        evaluate_snapshot(collect_predictions(records, Snapshot::PostRebuttal), truth,
                          Snapshot::PostRebuttal, &out.warnings));
  }
  return out;
}

namespace {

json prf_json(const metrics::Prf& p, double acc) {
  return {{"precision", p.precision}, {"recall", p.recall}, {"f1", p.f1}, {"accuracy", acc}};
}

}  // namespace

json to_json(const EvaluationReport& r) {
  json snapshots = json::array();
  for (const auto& s : r.snapshots) {
    json systems = json::array();
    for (const auto& sys : s.systems) {
      json row = {{"system", sys.system},
                  {"n", sys.n},
                  {"five_way", prf_json(sys.prf5, sys.acc5)},
                  {"two_way", prf_json(sys.prf2, sys.acc2)},
                  {"fpr", sys.rates.fpr},
                  {"fnr", sys.rates.fnr},
                  {"confusion_five_way", sys.five_way},
                  {"confusion_two_way", sys.two_way},
                  {"elo", sys.elo ? json(*sys.elo) : json(nullptr)}};
      systems.push_back(std::move(row));
    }
    snapshots.push_back({{"snapshot", to_string(s.snapshot)},
                         {"systems", systems},
                         {"kappa", {{"labels", s.kappa_labels}, {"matrix", s.kappa}}}});
  }
  return {{"run_id", r.run_id}, {"snapshots", snapshots}, {"warnings", r.warnings}};
}

std::string render_table(const json& evaluation, const std::map<std::string, double>& elo) {
  std::ostringstream out;
  auto pct = [](const json& v) {
    char buf[16];
    std::snprintf(buf, sizeof buf, "%6.1f", 100.0 * v.get<double>());
    return std::string(buf);
  };
  for (const auto& snap : evaluation.value("snapshots", json::array())) {
    out << "[" << snap.value("snapshot", "") << "]\n";
    char header[256];
    std::snprintf(header, sizeof header, "%-18s %6s %6s %6s %6s | %6s %6s %6s %6s | %6s %6s | %6s\n",
                  "Agent", "P5", "R5", "F5", "A5", "P2", "R2", "F2", "A2", "FPR", "FNR", "ELO");
    out << header << std::string(std::string_view(header).size() - 1, '-') << "\n";
    for (const auto& row : snap.value("systems", json::array())) {
      const auto system = row.value("system", "");
      std::string rating = "     -";
      if (auto it = elo.find(system); it != elo.end()) {
        char buf[16];
        std::snprintf(buf, sizeof buf, "%6.0f", it->second);
        rating = buf;
      } else if (row.contains("elo") && row.at("elo").is_number()) {
        char buf[16];
        std::snprintf(buf, sizeof buf, "%6.0f", row.at("elo").get<double>());
        rating = buf;
      }
      const auto& f5 = row.at("five_way");
      const auto& f2 = row.at("two_way");
      char line[256];
      std::snprintf(line, sizeof line, "%-18s %s %s %s %s | %s %s %s %s | %s %s | %s\n",
                    system.c_str(), pct(f5.at("precision")).c_str(), pct(f5.at("recall")).c_str(),
                    pct(f5.at("f1")).c_str(), pct(f5.at("accuracy")).c_str(),
                    pct(f2.at("precision")).c_str(), pct(f2.at("recall")).c_str(),
                    pct(f2.at("f1")).c_str(), pct(f2.at("accuracy")).c_str(),
                    pct(row.at("fpr")).c_str(), pct(row.at("fnr")).c_str(), rating.c_str());
      out << line;
    }
    out << "\n";
  }
  return out.str();
}

}  // namespace peerpanel::report
