#pragma once

#include <array>
#include <optional>
#include <string>
#include <string_view>

namespace peerpanel {

/// Five-way conference decision. Enumerator values are the ordinal encoding.
enum class DecisionLabel : int {
  DeskReject = 0,
  Reject = 1,
  AcceptPoster = 2,
  AcceptSpotlight = 3,
  AcceptOral = 4,
};

enum class BinaryDecision : int { Reject = 0, Accept = 1 };

inline constexpr std::array<DecisionLabel, 5> kAllLabels = {
    DecisionLabel::DeskReject, DecisionLabel::Reject,
    DecisionLabel::AcceptPoster, DecisionLabel::AcceptSpotlight,
    DecisionLabel::AcceptOral};

inline constexpr std::array<BinaryDecision, 2> kBinaryLabels = {
    BinaryDecision::Reject, BinaryDecision::Accept};

constexpr int ordinal(DecisionLabel label) noexcept {
  return static_cast<int>(label);
}

constexpr BinaryDecision to_binary(DecisionLabel label) noexcept {
  return ordinal(label) >= ordinal(DecisionLabel::AcceptPoster)
             ? BinaryDecision::Accept
             : BinaryDecision::Reject;
}

/// Inverse of ordinal(). Throws std::out_of_range outside [0, 4].
DecisionLabel from_ordinal(int value);

/// Canonical record spelling: "accept_oral", "desk_reject", ...
std::string_view to_string(DecisionLabel label) noexcept;
std::string_view to_string(BinaryDecision label) noexcept;

/// Conference spelling: "Accept (Oral)", "Desk Reject", ...
std::string_view display_name(DecisionLabel label) noexcept;

/// Lenient parser for labels as written by models or humans. Accepts the
/// canonical form, the conference form, and spacing/case variants such as
/// "accept poster" or "ACCEPT (POSTER)". A bare "accept" is ambiguous and
/// rejected.
std::optional<DecisionLabel> parse_label(std::string_view text);

std::optional<BinaryDecision> parse_binary(std::string_view text);

}  // namespace peerpanel
