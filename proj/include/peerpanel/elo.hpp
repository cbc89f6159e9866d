#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "peerpanel/types.hpp"

namespace peerpanel {

struct RatingEntry {
  std::string system_id;
  double rating = 1000.0;
  int matches_played = 0;

  bool operator==(const RatingEntry&) const = default;
};

enum class MatchOutcome { LeftWin, RightWin, Draw };
std::string_view to_string(MatchOutcome o) noexcept;

inline constexpr std::array<const char*, 5> kJudgeAxes = {"depth", "actionability", "summary",
                                                          "clarity", "helpfulness"};

struct MatchRecord {
  std::string match_id;
  std::string paper_id;
  std::string left_system;
  std::string right_system;
  std::uint64_t presentation_order_seed = 0;
  MatchOutcome outcome = MatchOutcome::Draw;
  std::map<std::string, std::string> axis_notes;
  std::string judge_prompt_hash;

  bool operator==(const MatchRecord&) const = default;
};

void to_json(json& j, const MatchRecord& m);
void from_json(const json& j, MatchRecord& m);
void to_json(json& j, const RatingEntry& e);

class RatingTable {
 public:
  RatingTable() = default;
  explicit RatingTable(const std::vector<std::string>& systems);

  void add(const std::string& system_id);
  bool contains(const std::string& system_id) const { return entries_.count(system_id) > 0; }
  /// Throws UnknownSystem.
  const RatingEntry& at(const std::string& system_id) const;
  RatingEntry& at(const std::string& system_id);

  double total() const;
  std::size_t size() const { return entries_.size(); }
  /// Sorted by rating desc, then system id asc.
  std::vector<RatingEntry> leaderboard() const;

  bool operator==(const RatingTable&) const = default;

 private:
  std::map<std::string, RatingEntry> entries_;
};

void to_json(json& j, const RatingTable& t);

double expected_score(double r_a, double r_b);

/// 32 for the first 30 matches, 16 until 500, then 10.
int k_factor(int matches_played);

/// Online update for one match; each side uses its own K. Throws
/// UnknownSystem.
void apply_update(RatingTable& table, const MatchRecord& match);

}  // namespace peerpanel
