#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "peerpanel/labels.hpp"
#include "peerpanel/types.hpp"

namespace peerpanel::metrics {

/// Rows are truth, columns are prediction, both in `labels` order.
struct ConfusionMatrix {
  std::vector<std::string> labels;
  std::vector<std::vector<std::int64_t>> counts;

  std::size_t size() const { return labels.size(); }
  std::int64_t total() const;
  bool operator==(const ConfusionMatrix&) const = default;
};

void to_json(json& j, const ConfusionMatrix& m);

/// Generic form over label indices in [0, labels.size()).
ConfusionMatrix confusion_indices(std::span<const int> preds, std::span<const int> truths,
                                  std::vector<std::string> labels);

/// Five-way matrix in ordinal order (desk_reject .. accept_oral).
ConfusionMatrix confusion(std::span<const DecisionLabel> preds,
                          std::span<const DecisionLabel> truths);

/// Two-way matrix in order (reject, accept).
ConfusionMatrix confusion(std::span<const BinaryDecision> preds,
                          std::span<const BinaryDecision> truths);

/// Sums five-way rows/columns into the binary (reject, accept) matrix.
ConfusionMatrix collapse_to_binary(const ConfusionMatrix& five_way);

struct Prf {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

/// Unweighted mean over classes of per-class precision, recall and F1; a
/// zero denominator scores that class 0.
Prf macro_prf(const ConfusionMatrix& m);

double accuracy(const ConfusionMatrix& m);

struct BinaryRates {
  double fpr = 0.0;
  double fnr = 0.0;
  std::vector<std::string> warnings;
};

/// FPR = FP/(FP+TN), FNR = FN/(FN+TP) with `positive` the column/row index
/// of the positive class (accept = 1 in the binary order). Requires 2x2.
BinaryRates binary_rates(const ConfusionMatrix& m, std::size_t positive = 1);

/// Cohen's kappa over arbitrary integer labels. When chance agreement is 1
/// (both raters constant and equal) returns 1 and sets *degenerate.
double cohens_kappa(std::span<const int> a, std::span<const int> b, bool* degenerate = nullptr);
double cohens_kappa(std::span<const DecisionLabel> a, std::span<const DecisionLabel> b,
                    bool* degenerate = nullptr);

}  // namespace peerpanel::metrics
