#include "peerpanel/arena.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <random>
#include <set>
#include <sstream>
#include <thread>

#include "peerpanel/errors.hpp"
#include "peerpanel/fsutil.hpp"
#include "peerpanel/store.hpp"
#include "peerpanel/text.hpp"

namespace peerpanel::arena {

std::vector<ScheduledMatch> schedule_matches(std::vector<std::string> systems,
                                             std::vector<std::string> papers,
                                             std::size_t budget, std::uint64_t seed) {
  std::sort(systems.begin(), systems.end());
  systems.erase(std::unique(systems.begin(), systems.end()), systems.end());
  std::sort(papers.begin(), papers.end());
  papers.erase(std::unique(papers.begin(), papers.end()), papers.end());
  if (systems.size() < 2) throw InsufficientSystems("arena needs at least two systems");
  if (papers.empty()) throw InsufficientSystems("arena needs at least one paper");
  if (budget == 0) throw PreconditionError("arena budget must be positive");

  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  for (std::size_t i = 0; i < systems.size(); ++i) {
    for (std::size_t j = i + 1; j < systems.size(); ++j) pairs.emplace_back(i, j);
  }
  const auto paper_order = seeded_permutation(papers.size(), seed);
  const auto pair_order = seeded_permutation(pairs.size(), seed ^ 0x5bd1e995u);

  std::vector<ScheduledMatch> out;
  out.reserve(budget);
  for (std::size_t j = 0; j < budget; ++j) {
    const auto& [a, b] = pairs[pair_order[j % pairs.size()]];
    out.push_back({papers[paper_order[j % papers.size()]], systems[a], systems[b]});
  }
  return out;
}

namespace {

std::string strip_markup(const std::string& line) {
  std::string out;
  for (char c : line) {
    if (c == '*' || c == '_' || c == '#' || c == '`' || c == '>') continue;
    out += c;
  }
  return text::to_lower(text::trim(out));
}

std::optional<MatchOutcome> outcome_word(const std::string& value) {
  std::string word;
  for (char c : value) {
    if (!std::isalpha(static_cast<unsigned char>(c))) {
      if (!word.empty()) break;
      continue;
    }
    word += c;
  }
  if (word == "left") return MatchOutcome::LeftWin;
  if (word == "right") return MatchOutcome::RightWin;
  if (word == "draw" || word == "tie") return MatchOutcome::Draw;
  return std::nullopt;
}

}  // namespace

Verdict parse_verdict(const std::string& reply) {
  Verdict v;
  std::optional<MatchOutcome> outcome;
  const auto lines = text::split_lines(reply);
  for (auto it = lines.rbegin(); it != lines.rend() && !outcome; ++it) {
    const auto line = strip_markup(*it);
    if (line.rfind("verdict", 0) != 0) continue;
    auto rest = line.substr(7);
    const auto colon = rest.find(':');
    if (colon != std::string::npos) rest = rest.substr(colon + 1);
    outcome = outcome_word(rest);
  }
  if (!outcome) throw ParseFailure("no \"verdict: left|right|draw\" line in judge reply");
  v.outcome = *outcome;
  for (const auto& raw : lines) {
    const auto line = strip_markup(raw);
    for (const char* axis : kJudgeAxes) {
      const std::string prefix = std::string(axis) + ":";
      if (line.rfind(prefix, 0) == 0 && !v.axis_notes.count(axis)) {
        // Keep the original casing of the note.
        const auto pos = raw.find(':');
        v.axis_notes[axis] = text::trim(raw.substr(pos + 1));
      }
    }
  }
  return v;
}

MatchRecord judge(llm::Gateway& gateway, const JudgeInput& input, const BlindingTerms& terms,
                  const JudgeSettings& settings, Trace* trace) {
  if (input.system_a == input.system_b) {
    throw PreconditionError("judge: a system cannot play itself");
  }
  const auto pair = blind(input.review_a, input.review_b, input.presentation_order_seed, terms);
  const auto context = normalize_formatting(terms.scrub(input.paper_context));
  auto request = prompts::make_request(settings.llm, prompts::judge_system(),
                                       prompts::judge_user(context, pair.left, pair.right));

  MatchRecord record;
  record.match_id = input.match_id;
  record.paper_id = input.paper_id;
  record.left_system = pair.a_on_left ? input.system_a : input.system_b;
  record.right_system = pair.a_on_left ? input.system_b : input.system_a;
  record.presentation_order_seed = input.presentation_order_seed;
  record.judge_prompt_hash = llm::request_hash(request);

  const std::string label = "judge/" + input.match_id;
  const int attempts = std::max(1, settings.parse_attempts);
  std::string reason;
  for (int attempt = 0; attempt < attempts; ++attempt) {
    if (trace) trace->prompt(label, request);
    const auto reply = gateway.complete(request).content;
    try {
      const auto verdict = parse_verdict(reply);
      record.outcome = verdict.outcome;
      record.axis_notes = verdict.axis_notes;
      return record;
    } catch (const ParseFailure& e) {
      reason = e.what();
      request.messages.push_back({llm::Role::Assistant, reply});
      request.messages.push_back({llm::Role::User, prompts::parse_retry(reason)});
    }
  }
  throw ParseFailure(label + ": " + reason + " after " + std::to_string(attempts) + " attempts");
}

TournamentResult run_tournament(llm::Gateway& gateway, const ReviewsBySystem& reviews,
                                const TournamentConfig& config,
                                const std::map<std::string, std::string>& paper_context) {
  std::vector<std::string> systems;
  for (const auto& [system, unused] : reviews) systems.push_back(system);
  if (systems.size() < 2) throw InsufficientSystems("arena needs at least two systems");

  std::vector<std::string> papers;
  for (const auto& [paper, text] : reviews.begin()->second) {
    const bool everywhere = std::all_of(reviews.begin(), reviews.end(), [&](const auto& kv) {
      auto it = kv.second.find(paper);
      return it != kv.second.end() && !text::trim(it->second).empty();
    });
    if (everywhere) papers.push_back(paper);
  }
  if (papers.empty()) throw InsufficientSystems("no paper was reviewed by every system");

  const auto schedule = schedule_matches(systems, papers, config.budget, config.seed);
  BlindingTerms terms(systems);

  std::mt19937_64 order_rng(config.seed ^ 0x9e3779b97f4a7c15ull);
  std::vector<JudgeInput> inputs;
  inputs.reserve(schedule.size());
  for (std::size_t j = 0; j < schedule.size(); ++j) {
    const auto& s = schedule[j];
    char id[32];
    std::snprintf(id, sizeof id, "m%05zu", j);
    auto ctx = paper_context.find(s.paper_id);
    inputs.push_back({id, s.paper_id, ctx != paper_context.end() ? ctx->second : s.paper_id,
                      s.system_a, s.system_b, reviews.at(s.system_a).at(s.paper_id),
                      reviews.at(s.system_b).at(s.paper_id), order_rng()});
  }

  // Judge concurrently; the gateway bounds in-flight requests.
  std::vector<std::optional<MatchRecord>> judged(inputs.size());
  std::vector<std::string> failures(inputs.size());
  std::vector<Trace> traces(inputs.size());
  std::vector<std::exception_ptr> fatal(inputs.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t j = next++; j < inputs.size(); j = next++) {
      try {
        judged[j] = judge(gateway, inputs[j], terms, config.judge, &traces[j]);
      } catch (const ParseFailure& e) {
        failures[j] = e.what();
      } catch (...) {
        fatal[j] = std::current_exception();
      }
    }
  };
  const auto n_workers = std::max<std::size_t>(1, std::min(config.workers, inputs.size()));
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < n_workers; ++w) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  for (const auto& e : fatal) {
    if (e) std::rethrow_exception(e);
  }

  TournamentResult out;
  out.table = RatingTable(systems);
  for (std::size_t j = 0; j < inputs.size(); ++j) {
    for (auto& p : traces[j].prompts()) out.prompts.push_back(std::move(p));
    if (!judged[j]) {
      out.discarded.push_back(inputs[j].match_id + " (" + inputs[j].paper_id + ", " +
                              inputs[j].system_a + " vs " + inputs[j].system_b +
                              ") discarded: " + failures[j]);
      continue;
    }
    apply_update(out.table, *judged[j]);
    out.matches.push_back(std::move(*judged[j]));
  }

  const auto n = out.matches.size();
  const auto want = static_cast<std::size_t>(
      std::ceil(config.qc_fraction * static_cast<double>(n) - 1e-9));
  auto pick = seeded_permutation(n, config.seed ^ 0xc2b2ae3d27d4eb4full);
  pick.resize(std::min(want, n));
  std::sort(pick.begin(), pick.end());
  for (auto i : pick) {
    const auto& m = out.matches[i];
    out.qc_sample.push_back({m, reviews.at(m.left_system).at(m.paper_id),
                             reviews.at(m.right_system).at(m.paper_id)});
  }
  return out;
}

void to_json(json& j, const QcItem& q) {
  j = {{"match", q.match}, {"left_text", q.left_text}, {"right_text", q.right_text}};
}

std::string render_leaderboard(const RatingTable& table) {
  std::ostringstream out;
  char line[160];
  std::snprintf(line, sizeof line, "%-4s %-24s %8s %8s\n", "#", "System", "ELO", "Matches");
  out << line << std::string(std::string_view(line).size() - 1, '-') << "\n";
  int rank = 0;
  for (const auto& e : table.leaderboard()) {
    std::snprintf(line, sizeof line, "%-4d %-24s %8.1f %8d\n", ++rank, e.system_id.c_str(),
                  e.rating, e.matches_played);
    out << line;
  }
  return out.str();
}

ArenaStore::ArenaStore(std::filesystem::path root) : root_(std::move(root)) {}

void ArenaStore::save(const std::string& arena_id, const TournamentResult& result,
                      const json& config) const {
  check_path_component(arena_id);
  const auto dir = root_ / arena_id;
  json report = {{"arena_id", arena_id},
                 {"config", config},
                 {"ratings", result.table},
                 {"matches", result.matches},
                 {"discarded", result.discarded}};
  write_file_atomic(dir / "report.json", report.dump(2));
  write_file_atomic(dir / "qc.json", json(result.qc_sample).dump(2));
  write_file_atomic(dir / "leaderboard.txt", render_leaderboard(result.table));
  std::map<std::string, int> attempts;
  for (const auto& p : result.prompts) {
    const auto name = p.label.substr(p.label.find('/') + 1);
    const int attempt = attempts[name]++;
    json j = llm::to_openai_json(p.request);
    j["label"] = p.label;
    j["attempt"] = attempt;
    j["cache_key"] = llm::request_hash(p.request);
    write_file_atomic(dir / "prompts" / (name + "." + std::to_string(attempt) + ".json"),
                      j.dump(2));
  }
}

std::optional<json> ArenaStore::report(const std::string& arena_id) const {
  check_path_component(arena_id);
  const auto path = root_ / arena_id / "report.json";
  if (!std::filesystem::exists(path)) return std::nullopt;
  return json::parse(read_file(path));
}

json ArenaStore::qc(const std::string& arena_id) const {
  check_path_component(arena_id);
  std::lock_guard lock(mu_);
  const auto dir = root_ / arena_id;
  if (!std::filesystem::exists(dir / "qc.json")) throw IoError("unknown arena: " + arena_id);
  auto items = json::parse(read_file(dir / "qc.json"));
  json annotations = json::object();
  if (std::filesystem::exists(dir / "annotations.json")) {
    annotations = json::parse(read_file(dir / "annotations.json"));
  }
  std::size_t annotated = 0;
  std::size_t disagree = 0;
  for (auto& item : items) {
    const auto id = item.at("match").at("match_id").get<std::string>();
    if (annotations.contains(id)) {
      item["annotation"] = annotations.at(id);
      ++annotated;
      if (annotations.at(id).value("verdict", "") == "disagree") ++disagree;
    } else {
      item["annotation"] = nullptr;
    }
  }
  return {{"arena_id", arena_id},
          {"items", items},
          {"annotated", annotated},
          {"disagreements", disagree},
          {"discrepancy_rate",
           annotated ? json(static_cast<double>(disagree) / static_cast<double>(annotated))
                     : json(nullptr)}};
}

void ArenaStore::annotate(const std::string& arena_id, const std::string& match_id,
                          const std::string& verdict, const std::string& note) const {
  check_path_component(arena_id);
  if (verdict != "agree" && verdict != "disagree") {
    throw PreconditionError("annotation verdict must be \"agree\" or \"disagree\"");
  }
  std::lock_guard lock(mu_);
  const auto dir = root_ / arena_id;
  if (!std::filesystem::exists(dir / "qc.json")) throw IoError("unknown arena: " + arena_id);
  const auto items = json::parse(read_file(dir / "qc.json"));
  const bool sampled = std::any_of(items.begin(), items.end(), [&](const json& item) {
    return item.at("match").at("match_id") == match_id;
  });
  if (!sampled) throw PreconditionError("match " + match_id + " is not in the QC sample");
  json annotations = json::object();
  if (std::filesystem::exists(dir / "annotations.json")) {
    annotations = json::parse(read_file(dir / "annotations.json"));
  }
  annotations[match_id] = {{"verdict", verdict}, {"note", note}};
  write_file_atomic(dir / "annotations.json", annotations.dump(2));
}

std::vector<std::string> ArenaStore::arenas() const {
  std::vector<std::string> out;
  if (!std::filesystem::exists(root_)) return out;
  for (const auto& e : std::filesystem::directory_iterator(root_)) {
    if (e.is_directory() && std::filesystem::exists(e.path() / "report.json")) {
      out.push_back(e.path().filename().string());
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace peerpanel::arena
