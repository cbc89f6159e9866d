#pragma once

#include <string>
#include <utility>
#include <vector>

#include "peerpanel/types.hpp"

// Parsers for agent replies. Each throws ParseFailure with a short reason
// that is fed back to the model on the next attempt.
namespace peerpanel::replies {

ReviewReport parse_review(const std::string& reply, const std::string& persona,
                          const std::string& paper_id);

Rebuttal parse_rebuttal(const std::string& reply, const std::string& paper_id,
                        const std::string& config_id);

struct PostRebuttal {
  std::string response;
  DecisionLabel recommendation;
};

/// Reads the closing "maintain: X" / "upgrade to X" / "downgrade to X"
/// line (or a JSON recommendation). A bare "maintain" keeps `previous`.
PostRebuttal parse_post_rebuttal(const std::string& reply, DecisionLabel previous);

struct RawFact {
  std::string claim;
  std::string source_persona;
  std::string quote;
  double significance = 0.0;
};

std::vector<RawFact> parse_facts(const std::string& reply);

struct MetaDecision {
  MetaSections sections;
  DecisionLabel decision;
};

MetaDecision parse_metareview(const std::string& reply);

}  // namespace peerpanel::replies
