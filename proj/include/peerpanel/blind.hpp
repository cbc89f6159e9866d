#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace peerpanel {

/// Strings that must never reach a judge: persona names, system ids, and
/// the "human"/"metareviewer" markers. Matching is case-insensitive.
class BlindingTerms {
 public:
  /// Shipped persona names plus the fixed markers.
  BlindingTerms();
  explicit BlindingTerms(const std::vector<std::string>& extra);

  void add(const std::string& term);
  const std::vector<std::string>& terms() const { return terms_; }

  /// Replaces every word that contains a term (or, for terms shorter than
  /// three characters, equals one) with a neutral placeholder. Terms with
  /// spaces or punctuation are replaced wherever they occur.
  std::string scrub(const std::string& text) const;

  /// First term found in `text` (case-insensitive substring), or "".
  std::string find_leak(const std::string& text) const;

 private:
  std::vector<std::string> terms_;  // lowercased, unique
};

inline constexpr const char* kBlindPlaceholder = "[redacted]";

/// Uniform headings ("## "), bullets ("- "), single spaces, single blank
/// lines between blocks.
std::string normalize_formatting(const std::string& text);

struct BlindedPair {
  std::string left;
  std::string right;
  // Private mapping: true when review_a is shown on the left.
  bool a_on_left = true;
};

/// Scrubs and normalizes both reviews; review_a goes right when the seed is
/// odd. Throws PreconditionError on empty input.
BlindedPair blind(const std::string& review_a, const std::string& review_b, std::uint64_t seed,
                  const BlindingTerms& terms = BlindingTerms());

}  // namespace peerpanel
