#pragma once

#include <string_view>
#include <vector>

#include "peerpanel/types.hpp"

namespace peerpanel {

/// A quote resolves when, after whitespace normalization and case-folding,
/// it is a contiguous substring of the manuscript body (manuscript_span) or
/// of the referenced literature item's title+abstract or the summary text
/// (literature_item).
bool resolves(const GroundingRef& ref, const Manuscript& m, const LiteratureSummary* lit);

/// Every ref in the report that does not resolve.
std::vector<GroundingRef> verify_grounding(const ReviewReport& report, const Manuscript& m,
                                           const LiteratureSummary* lit);

/// True iff all six axes are present and each has at least one resolvable ref.
bool is_grounded(const ReviewReport& report, const Manuscript& m, const LiteratureSummary* lit);

/// Classifies a fact's supporting quote with the same substring rule.
FactVerdict verify_fact_quote(std::string_view quote, const Manuscript& m,
                              const LiteratureSummary* lit);

}  // namespace peerpanel
