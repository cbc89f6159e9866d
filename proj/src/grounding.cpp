#include "peerpanel/grounding.hpp"

#include "peerpanel/text.hpp"

namespace peerpanel {

namespace {

bool in_literature(std::string_view quote, const LiteratureSummary& lit,
                   const std::string* locator) {
  if (text::contains_normalized(lit.summary, quote)) return true;
  for (const auto& item : lit.ranked_items) {
    if (locator && item.item_id != *locator) continue;
    if (text::contains_normalized(item.title + " " + item.abstract, quote)) return true;
  }
  return false;
}

}  // namespace

bool resolves(const GroundingRef& ref, const Manuscript& m, const LiteratureSummary* lit) {
  switch (ref.source) {
    case GroundingSource::ManuscriptSpan:
      return text::contains_normalized(m.body, ref.quote);
    case GroundingSource::LiteratureItem:
      return lit != nullptr && in_literature(ref.quote, *lit, &ref.locator);
  }
  return false;
}

std::vector<GroundingRef> verify_grounding(const ReviewReport& report, const Manuscript& m,
                                           const LiteratureSummary* lit) {
  std::vector<GroundingRef> unresolved;
  for (const auto& [axis, assessment] : report.axes) {
    for (const auto& ref : assessment.grounding) {
      if (!resolves(ref, m, lit)) unresolved.push_back(ref);
    }
  }
  return unresolved;
}

bool is_grounded(const ReviewReport& report, const Manuscript& m, const LiteratureSummary* lit) {
  for (auto axis : kAllAxes) {
    auto it = report.axes.find(axis);
    if (it == report.axes.end()) return false;
    bool any = false;
    for (const auto& ref : it->second.grounding) {
      if (resolves(ref, m, lit)) {
        any = true;
        break;
      }
    }
    if (!any) return false;
  }
  return true;
}

FactVerdict verify_fact_quote(std::string_view quote, const Manuscript& m,
                              const LiteratureSummary* lit) {
  if (text::contains_normalized(m.body, quote)) return FactVerdict::SupportedManuscript;
  if (lit && in_literature(quote, *lit, nullptr)) return FactVerdict::SupportedLiterature;
  return FactVerdict::Unsupported;
}

}  // namespace peerpanel
