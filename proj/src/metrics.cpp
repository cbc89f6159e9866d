#include "peerpanel/metrics.hpp"

#include <map>

#include "peerpanel/errors.hpp"

namespace peerpanel::metrics {

std::int64_t ConfusionMatrix::total() const {
  std::int64_t t = 0;
  for (const auto& row : counts) {
    for (auto c : row) t += c;
  }
  return t;
}

void to_json(json& j, const ConfusionMatrix& m) {
  j = json{{"labels", m.labels}, {"counts", m.counts}};
}

ConfusionMatrix confusion_indices(std::span<const int> preds, std::span<const int> truths,
                                  std::vector<std::string> labels) {
  if (preds.size() != truths.size()) {
    throw LengthMismatch("predictions and truths differ in length (" +
                         std::to_string(preds.size()) + " vs " + std::to_string(truths.size()) +
                         ")");
  }
  if (preds.empty()) throw PreconditionError("confusion matrix over no pairs");
  const auto n = static_cast<int>(labels.size());
  ConfusionMatrix m;
  m.labels = std::move(labels);
  m.counts.assign(m.labels.size(), std::vector<std::int64_t>(m.labels.size(), 0));
  for (std::size_t i = 0; i < preds.size(); ++i) {
    if (preds[i] < 0 || preds[i] >= n || truths[i] < 0 || truths[i] >= n) {
      throw PreconditionError("label index out of range");
    }
    ++m.counts[static_cast<std::size_t>(truths[i])][static_cast<std::size_t>(preds[i])];
  }
  return m;
}

namespace {

std::vector<std::string> five_way_names() {
  std::vector<std::string> out;
  for (auto l : kAllLabels) out.emplace_back(to_string(l));
  return out;
}

std::vector<std::string> binary_names() { return {"reject", "accept"}; }

}  // namespace

ConfusionMatrix confusion(std::span<const DecisionLabel> preds,
                          std::span<const DecisionLabel> truths) {
  std::vector<int> p;
  std::vector<int> t;
  for (auto l : preds) p.push_back(ordinal(l));
  for (auto l : truths) t.push_back(ordinal(l));
  return confusion_indices(p, t, five_way_names());
}

ConfusionMatrix confusion(std::span<const BinaryDecision> preds,
                          std::span<const BinaryDecision> truths) {
  std::vector<int> p;
  std::vector<int> t;
  for (auto l : preds) p.push_back(static_cast<int>(l));
  for (auto l : truths) t.push_back(static_cast<int>(l));
  return confusion_indices(p, t, binary_names());
}

ConfusionMatrix collapse_to_binary(const ConfusionMatrix& five_way) {
  if (five_way.size() != kAllLabels.size()) {
    throw PreconditionError("collapse_to_binary needs a five-way matrix");
  }
  ConfusionMatrix m;
  m.labels = binary_names();
  m.counts.assign(2, std::vector<std::int64_t>(2, 0));
  for (std::size_t t = 0; t < 5; ++t) {
    for (std::size_t p = 0; p < 5; ++p) {
      const auto bt = static_cast<std::size_t>(to_binary(kAllLabels[t]));
      const auto bp = static_cast<std::size_t>(to_binary(kAllLabels[p]));
      m.counts[bt][bp] += five_way.counts[t][p];
    }
  }
  return m;
}

Prf macro_prf(const ConfusionMatrix& m) {
  const std::size_t k = m.size();
  if (k == 0) return {};
  Prf sum;
  for (std::size_t c = 0; c < k; ++c) {
    const std::int64_t tp = m.counts[c][c];
    std::int64_t predicted = 0;
    std::int64_t actual = 0;
    for (std::size_t o = 0; o < k; ++o) {
      predicted += m.counts[o][c];
      actual += m.counts[c][o];
    }
    const double p = predicted > 0 ? static_cast<double>(tp) / static_cast<double>(predicted) : 0.0;
    const double r = actual > 0 ? static_cast<double>(tp) / static_cast<double>(actual) : 0.0;
    const double f = p + r > 0.0 ? 2.0 * p * r / (p + r) : 0.0;
    sum.precision += p;
    sum.recall += r;
    sum.f1 += f;
  }
  const auto kd = static_cast<double>(k);
  return {sum.precision / kd, sum.recall / kd, sum.f1 / kd};
}

double accuracy(const ConfusionMatrix& m) {
  const auto total = m.total();
  if (total == 0) return 0.0;
  std::int64_t trace = 0;
  for (std::size_t c = 0; c < m.size(); ++c) trace += m.counts[c][c];
  return static_cast<double>(trace) / static_cast<double>(total);
}

BinaryRates binary_rates(const ConfusionMatrix& m, std::size_t positive) {
  if (m.size() != 2) throw PreconditionError("binary_rates requires a 2x2 matrix");
  if (positive > 1) throw PreconditionError("positive index must be 0 or 1");
  const std::size_t negative = 1 - positive;
  const auto tp = m.counts[positive][positive];
  const auto fn = m.counts[positive][negative];
  const auto fp = m.counts[negative][positive];
  const auto tn = m.counts[negative][negative];
  BinaryRates out;
  if (fp + tn > 0) {
    out.fpr = static_cast<double>(fp) / static_cast<double>(fp + tn);
  } else {
    out.warnings.emplace_back("FPR undefined (no true negatives); reported as 0");
  }
  if (fn + tp > 0) {
    out.fnr = static_cast<double>(fn) / static_cast<double>(fn + tp);
  } else {
    out.warnings.emplace_back("FNR undefined (no true positives); reported as 0");
  }
  return out;
}

double cohens_kappa(std::span<const int> a, std::span<const int> b, bool* degenerate) {
  if (a.size() != b.size()) throw LengthMismatch("kappa over sequences of different length");
  if (a.empty()) throw PreconditionError("kappa over empty sequences");
  const auto n = static_cast<double>(a.size());
  std::map<int, std::int64_t> ma;
  std::map<int, std::int64_t> mb;
  std::int64_t agree = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    ++ma[a[i]];
    ++mb[b[i]];
    if (a[i] == b[i]) ++agree;
  }
  const double po = static_cast<double>(agree) / n;
  double pe = 0.0;
  for (const auto& [label, count] : ma) {
    auto it = mb.find(label);
    if (it != mb.end()) {
      pe += (static_cast<double>(count) / n) * (static_cast<double>(it->second) / n);
    }
  }
  if (degenerate) *degenerate = false;
  if (pe >= 1.0) {
    if (degenerate) *degenerate = true;
    return 1.0;
  }
  return (po - pe) / (1.0 - pe);
}

double cohens_kappa(std::span<const DecisionLabel> a, std::span<const DecisionLabel> b,
                    bool* degenerate) {
  std::vector<int> ia;
  std::vector<int> ib;
  for (auto l : a) ia.push_back(ordinal(l));
  for (auto l : b) ib.push_back(ordinal(l));
  return cohens_kappa(ia, ib, degenerate);
}

}  // namespace peerpanel::metrics
