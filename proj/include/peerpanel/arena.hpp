#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "peerpanel/blind.hpp"
#include "peerpanel/elo.hpp"
#include "peerpanel/gateway.hpp"
#include "peerpanel/prompts.hpp"
#include "peerpanel/rng.hpp"
#include "peerpanel/trace.hpp"

namespace peerpanel::arena {

struct ScheduledMatch {
  std::string paper_id;
  std::string system_a;  // system_a < system_b
  std::string system_b;

  bool operator==(const ScheduledMatch&) const = default;
};

/// Match j gets the (j mod P)-th paper and the (j mod Q)-th unordered pair
/// of seeded permutations, so per-paper and per-pair counts differ by at
/// most one. Throws InsufficientSystems / PreconditionError.
std::vector<ScheduledMatch> schedule_matches(std::vector<std::string> systems,
                                             std::vector<std::string> papers,
                                             std::size_t budget, std::uint64_t seed);

struct Verdict {
  MatchOutcome outcome = MatchOutcome::Draw;  // relative to the presented order
  std::map<std::string, std::string> axis_notes;
};

/// Reads the last "verdict: left|right|draw" line plus per-axis note lines.
/// Throws ParseFailure.
Verdict parse_verdict(const std::string& reply);

struct JudgeSettings {
  prompts::AgentSettings llm;
  int parse_attempts = 2;
};

struct JudgeInput {
  std::string match_id;
  std::string paper_id;
  std::string paper_context;
  std::string system_a;
  std::string system_b;
  std::string review_a;
  std::string review_b;
  std::uint64_t presentation_order_seed = 0;
};

/// Blinds, prompts, parses (up to parse_attempts) and maps the verdict
/// back to system ids. Every request sent is recorded in `trace` under the
/// match id. Throws ParseFailure.
MatchRecord judge(llm::Gateway& gateway, const JudgeInput& input, const BlindingTerms& terms,
                  const JudgeSettings& settings, Trace* trace = nullptr);

/// system id -> paper id -> review text
using ReviewsBySystem = std::map<std::string, std::map<std::string, std::string>>;

struct TournamentConfig {
  std::size_t budget = 100;
  std::uint64_t seed = 0;
  JudgeSettings judge;
  double qc_fraction = 0.05;
  std::size_t workers = 8;
};

struct QcItem {
  MatchRecord match;
  std::string left_text;  // unblinded, as written by left_system
  std::string right_text;
};

struct TournamentResult {
  RatingTable table;
  std::vector<MatchRecord> matches;  // judged, in schedule order
  std::vector<QcItem> qc_sample;
  std::vector<std::string> discarded;  // log lines for dropped matches
  std::vector<Trace::PromptEntry> prompts;
};

/// Schedules over papers every system reviewed, judges concurrently, and
/// applies rating updates in schedule order. `paper_context` supplies the
/// title/abstract shown to the judge (paper id when absent).
TournamentResult run_tournament(llm::Gateway& gateway, const ReviewsBySystem& reviews,
                                const TournamentConfig& config,
                                const std::map<std::string, std::string>& paper_context = {});

void to_json(json& j, const QcItem& q);

std::string render_leaderboard(const RatingTable& table);

/// <root>/<arena_id>/{report.json, qc.json, annotations.json, prompts/}
class ArenaStore {
 public:
  explicit ArenaStore(std::filesystem::path root);

  void save(const std::string& arena_id, const TournamentResult& result,
            const json& config) const;
  std::optional<json> report(const std::string& arena_id) const;
  /// QC items with any human annotation merged in, plus the discrepancy
  /// rate over annotated items. Throws IoError when the arena is unknown.
  json qc(const std::string& arena_id) const;
  /// verdict is "agree" or "disagree". Throws PreconditionError /
  /// IoError for unknown arenas or matches outside the QC sample.
  void annotate(const std::string& arena_id, const std::string& match_id,
                const std::string& verdict, const std::string& note) const;
  std::vector<std::string> arenas() const;

 private:
  std::filesystem::path root_;
  mutable std::mutex mu_;
};

}  // namespace peerpanel::arena
