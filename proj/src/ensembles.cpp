#include "peerpanel/ensembles.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "peerpanel/errors.hpp"

namespace peerpanel::ensembles {

DecisionLabel majority_vote(std::span<const DecisionLabel> labels) {
  if (labels.empty()) throw PreconditionError("majority vote over no labels");
  std::array<int, 5> counts{};
  for (auto l : labels) ++counts[static_cast<std::size_t>(ordinal(l))];
  // max_element returns the first maximum, i.e. the lowest ordinal.
  const auto best = std::max_element(counts.begin(), counts.end());
  return from_ordinal(static_cast<int>(best - counts.begin()));
}

DecisionLabel average_decision(std::span<const DecisionLabel> labels) {
  if (labels.empty()) throw PreconditionError("average over no labels");
  long sum = 0;
  for (auto l : labels) sum += ordinal(l);
  const long n = static_cast<long>(labels.size());
  // Half-down rounding of sum/n in integers: round(x) = ceil(x - 1/2)
  // = ceil((2*sum - n) / (2n)).
  const long num = 2 * sum - n;
  const long den = 2 * n;
  const long rounded = num >= 0 ? (num + den - 1) / den : -((-num) / den);
  return from_ordinal(static_cast<int>(rounded));
}

MetaReview meta_over_subset(ReviewEngine& engine, const PipelineRecord& record,
                            const Manuscript& m, const std::vector<std::string>& subset,
                            Trace* trace) {
  for (const auto& name : subset) {
    const bool present = std::any_of(record.reviews_pre.begin(), record.reviews_pre.end(),
                                     [&](const auto& r) { return r.persona == name; });
    if (!present) {
      throw UnknownPersona("persona '" + name + "' has no review in record " + record.paper_id);
    }
  }
  auto selected = [&](const std::vector<ReviewReport>& reviews) {
    std::vector<ReviewReport> out;
    for (const auto& r : reviews) {
      if (std::find(subset.begin(), subset.end(), r.persona) != subset.end()) out.push_back(r);
    }
    return out;
  };
  const auto pre = selected(record.reviews_pre);
  const auto post = selected(record.reviews_post);
  const std::optional<std::string> ac = record.flags.conference_instructions
                                            ? engine.config().ac_guidelines
                                            : std::nullopt;
  return engine.run_metareview(pre, record.rebuttal ? &*record.rebuttal : nullptr, post, m,
                               record.literature ? &*record.literature : nullptr, ac, trace);
}

}  // namespace peerpanel::ensembles
