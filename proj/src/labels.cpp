#include "peerpanel/labels.hpp"

#include <cctype>
#include <stdexcept>

#include "peerpanel/text.hpp"

namespace peerpanel {

DecisionLabel from_ordinal(int value) {
  if (value < 0 || value > 4) {
    throw std::out_of_range("decision ordinal out of range: " +
                            std::to_string(value));
  }
  return static_cast<DecisionLabel>(value);
}

std::string_view to_string(DecisionLabel label) noexcept {
  switch (label) {
    case DecisionLabel::DeskReject: return "desk_reject";
    case DecisionLabel::Reject: return "reject";
    case DecisionLabel::AcceptPoster: return "accept_poster";
    case DecisionLabel::AcceptSpotlight: return "accept_spotlight";
    case DecisionLabel::AcceptOral: return "accept_oral";
  }
  return "reject";
}

std::string_view to_string(BinaryDecision label) noexcept {
  return label == BinaryDecision::Accept ? "accept" : "reject";
}

std::string_view display_name(DecisionLabel label) noexcept {
  switch (label) {
    case DecisionLabel::DeskReject: return "Desk Reject";
    case DecisionLabel::Reject: return "Reject";
    case DecisionLabel::AcceptPoster: return "Accept (Poster)";
    case DecisionLabel::AcceptSpotlight: return "Accept (Spotlight)";
    case DecisionLabel::AcceptOral: return "Accept (Oral)";
  }
  return "Reject";
}

namespace {

// Lowercase, punctuation folded to single spaces: "Accept (Poster)" and
// "accept_poster" both become "accept poster".
std::string fold(std::string_view s) {
  std::string out;
  bool pending_space = false;
  for (char c : s) {
    const auto uc = static_cast<unsigned char>(c);
    if (std::isalnum(uc)) {
      if (pending_space && !out.empty()) out.push_back(' ');
      pending_space = false;
      out.push_back(static_cast<char>(std::tolower(uc)));
    } else {
      pending_space = true;
    }
  }
  return out;
}

}  // namespace

std::optional<DecisionLabel> parse_label(std::string_view text) {
  const std::string f = fold(text);
  if (f == "accept oral" || f == "oral") return DecisionLabel::AcceptOral;
  if (f == "accept spotlight" || f == "spotlight") {
    return DecisionLabel::AcceptSpotlight;
  }
  if (f == "accept poster" || f == "poster") return DecisionLabel::AcceptPoster;
  if (f == "desk reject" || f == "desk rejected" || f == "deskreject") {
    return DecisionLabel::DeskReject;
  }
  if (f == "reject" || f == "rejected") return DecisionLabel::Reject;
  return std::nullopt;
}

std::optional<BinaryDecision> parse_binary(std::string_view text) {
  const std::string f = fold(text);
  if (f == "accept") return BinaryDecision::Accept;
  if (f == "reject") return BinaryDecision::Reject;
  if (auto label = parse_label(text)) return to_binary(*label);
  return std::nullopt;
}

}  // namespace peerpanel
