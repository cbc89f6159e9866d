#include "peerpanel/elo.hpp"

#include <algorithm>
#include <cmath>

#include "peerpanel/errors.hpp"

namespace peerpanel {

std::string_view to_string(MatchOutcome o) noexcept {
  switch (o) {
    case MatchOutcome::LeftWin: return "left_win";
    case MatchOutcome::RightWin: return "right_win";
    case MatchOutcome::Draw: return "draw";
  }
  return "draw";
}

namespace {

MatchOutcome parse_outcome(const std::string& s) {
  if (s == "left_win") return MatchOutcome::LeftWin;
  if (s == "right_win") return MatchOutcome::RightWin;
  if (s == "draw") return MatchOutcome::Draw;
  throw SchemaError("unknown match outcome: " + s);
}

}  // namespace

void to_json(json& j, const MatchRecord& m) {
  j = {{"match_id", m.match_id},
       {"paper_id", m.paper_id},
       {"left_system", m.left_system},
       {"right_system", m.right_system},
       {"presentation_order_seed", m.presentation_order_seed},
       {"outcome", to_string(m.outcome)},
       {"axis_notes", m.axis_notes},
       {"judge_prompt_hash", m.judge_prompt_hash}};
}

void from_json(const json& j, MatchRecord& m) {
  try {
    m.match_id = j.at("match_id").get<std::string>();
    m.paper_id = j.at("paper_id").get<std::string>();
    m.left_system = j.at("left_system").get<std::string>();
    m.right_system = j.at("right_system").get<std::string>();
    m.presentation_order_seed = j.value("presentation_order_seed", std::uint64_t{0});
    m.outcome = parse_outcome(j.at("outcome").get<std::string>());
    m.axis_notes = j.value("axis_notes", std::map<std::string, std::string>{});
    m.judge_prompt_hash = j.value("judge_prompt_hash", "");
  } catch (const json::exception& e) {
    throw SchemaError(std::string("MatchRecord: ") + e.what());
  }
  if (m.left_system == m.right_system) throw SchemaError("MatchRecord: left_system == right_system");
}

void to_json(json& j, const RatingEntry& e) {
  j = {{"system_id", e.system_id}, {"rating", e.rating}, {"matches_played", e.matches_played}};
}

RatingTable::RatingTable(const std::vector<std::string>& systems) {
  for (const auto& s : systems) add(s);
}

void RatingTable::add(const std::string& system_id) {
  entries_.try_emplace(system_id, RatingEntry{system_id});
}

const RatingEntry& RatingTable::at(const std::string& system_id) const {
  auto it = entries_.find(system_id);
  if (it == entries_.end()) throw UnknownSystem("unknown system: " + system_id);
  return it->second;
}

RatingEntry& RatingTable::at(const std::string& system_id) {
  auto it = entries_.find(system_id);
  if (it == entries_.end()) throw UnknownSystem("unknown system: " + system_id);
  return it->second;
}

double RatingTable::total() const {
  double sum = 0.0;
  for (const auto& [id, e] : entries_) sum += e.rating;
  return sum;
}

std::vector<RatingEntry> RatingTable::leaderboard() const {
  std::vector<RatingEntry> out;
  for (const auto& [id, e] : entries_) out.push_back(e);
  std::stable_sort(out.begin(), out.end(),
                   [](const auto& a, const auto& b) { return a.rating > b.rating; });
  return out;
}

void to_json(json& j, const RatingTable& t) { j = t.leaderboard(); }

double expected_score(double r_a, double r_b) {
  return 1.0 / (1.0 + std::pow(10.0, (r_b - r_a) / 400.0));
}

int k_factor(int matches_played) {
  if (matches_played < 30) return 32;
  if (matches_played < 500) return 16;
  return 10;
}

void apply_update(RatingTable& table, const MatchRecord& match) {
  auto& left = table.at(match.left_system);
  auto& right = table.at(match.right_system);
  if (&left == &right) throw PreconditionError("match between a system and itself");
  double s_left = 0.5;
  if (match.outcome == MatchOutcome::LeftWin) s_left = 1.0;
  if (match.outcome == MatchOutcome::RightWin) s_left = 0.0;
  const double e_left = expected_score(left.rating, right.rating);
  const double e_right = expected_score(right.rating, left.rating);
  const int k_left = k_factor(left.matches_played);
  const int k_right = k_factor(right.matches_played);
  left.rating += k_left * (s_left - e_left);
  right.rating += k_right * ((1.0 - s_left) - e_right);
  ++left.matches_played;
  ++right.matches_played;
}

}  // namespace peerpanel
