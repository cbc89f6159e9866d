#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "peerpanel/metrics.hpp"
#include "peerpanel/pipeline.hpp"

namespace peerpanel::report {

/// system id -> paper id -> label
using Predictions = std::map<std::string, std::map<std::string, DecisionLabel>>;

enum class Snapshot { PreRebuttal, PostRebuttal };
std::string_view to_string(Snapshot s) noexcept;

/// Per-persona labels plus the "majority", "average" and "meta" ensembles
/// for one snapshot. Post-rebuttal personas fall back to their
/// pre-rebuttal label when no response exists.
Predictions collect_predictions(const std::vector<PipelineRecord>& records, Snapshot snapshot);

struct SystemScores {
  std::string system;
  std::size_t n = 0;
  metrics::ConfusionMatrix five_way;
  metrics::ConfusionMatrix two_way;
  metrics::Prf prf5;
  double acc5 = 0.0;
  metrics::Prf prf2;
  double acc2 = 0.0;
  metrics::BinaryRates rates;
  std::optional<double> elo;
};

struct SnapshotReport {
  Snapshot snapshot = Snapshot::PreRebuttal;
  std::vector<SystemScores> systems;
  // Pairwise kappa over systems plus "ground_truth", on shared papers.
  std::vector<std::string> kappa_labels;
  std::vector<std::vector<double>> kappa;
};

struct EvaluationReport {
  std::string run_id;
  std::vector<SnapshotReport> snapshots;
  std::vector<std::string> warnings;
};

SnapshotReport evaluate_snapshot(const Predictions& predictions,
                                 const std::map<std::string, DecisionLabel>& truth,
                                 Snapshot snapshot, std::vector<std::string>* warnings = nullptr);

/// Pre- and post-rebuttal snapshots (post only when some record has a
/// rebuttal).
EvaluationReport evaluate_records(const std::string& run_id,
                                  const std::vector<PipelineRecord>& records,
                                  const std::map<std::string, DecisionLabel>& truth);

json to_json(const EvaluationReport& r);

/// Aligned table: Agent | 5-way P R F A | 2-way P R F A | FPR FNR | ELO.
/// `elo` overrides/extends ratings by system id.
std::string render_table(const json& evaluation, const std::map<std::string, double>& elo = {});

}  // namespace peerpanel::report
