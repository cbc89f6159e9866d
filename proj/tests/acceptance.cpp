// Acceptance gate: one PASS/FAIL line per primary criterion. Exit status is
// the number of failures.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <random>
#include <set>

#include "peerpanel/arena.hpp"
#include "peerpanel/curator.hpp"
#include "peerpanel/elo.hpp"
#include "peerpanel/ensembles.hpp"
#include "peerpanel/metrics.hpp"
#include "peerpanel/personas.hpp"
#include "peerpanel/pipeline.hpp"
#include "peerpanel/report.hpp"
#include "peerpanel/store.hpp"
#include "support/world.hpp"

namespace fs = std::filesystem;
using namespace peerpanel;

namespace {

struct Outcome {
  bool ok = true;
  std::string detail;

  void check(bool cond, const std::string& what) {
    if (!cond && ok) {
      ok = false;
      detail = what;
    }
  }
};

int failures = 0;

void criterion(const char* name, double limit_s, const std::function<Outcome()>& body) {
  const auto t0 = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o.ok = false;
    o.detail = std::string("exception: ") + e.what();
  }
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (o.ok && limit_s > 0 && secs >= limit_s) {
    o.ok = false;
    o.detail = "runtime over the " + std::to_string(limit_s) + " s budget";
  }
  if (!o.ok) ++failures;
  std::printf("%s  %-28s %7.2fs  %s\n", o.ok ? "PASS" : "FAIL", name, secs, o.detail.c_str());
  std::fflush(stdout);
}

fs::path scratch(const std::string& name) {
  auto dir = fs::temp_directory_path() / ("peerpanel-acceptance-" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

// ------------------------------------------------------------ sampler

std::vector<Manuscript> population(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> score(1.0, 10.0);
  std::vector<Manuscript> out;
  auto add = [&](const char* prefix, int n, DecisionLabel label, SourceStatus status) {
    for (int i = 0; i < n; ++i) {
      Manuscript m;
      m.paper_id = std::string(prefix) + std::to_string(i);
      m.ground_truth = label;
      m.source_status = status;
      m.avg_reviewer_score = std::round(score(rng) * 4) / 4;  // plenty of ties
      out.push_back(std::move(m));
    }
  };
  add("oral", 213, DecisionLabel::AcceptOral, SourceStatus::Active);
  add("spot", 380, DecisionLabel::AcceptSpotlight, SourceStatus::Active);
  add("post", 3115, DecisionLabel::AcceptPoster, SourceStatus::Active);
  add("rej", 5019, DecisionLabel::Reject, SourceStatus::Active);
  add("wd", 2875, DecisionLabel::Reject, SourceStatus::Withdrawn);
  add("desk", 70, DecisionLabel::DeskReject, SourceStatus::Active);
  return out;
}

Outcome sampler_identity() {
  Outcome o;
  const auto corpus = population(7);
  const auto a = curator::stratified_sample(corpus, 42);
  const auto b = curator::stratified_sample(corpus, 42);
  o.check(a.entries.size() == 1963, "manifest size " + std::to_string(a.entries.size()));
  const auto counts = a.label_counts();
  auto count = [&](DecisionLabel l) {
    auto it = counts.find(std::string(to_string(l)));
    return it == counts.end() ? std::size_t{0} : it->second;
  };
  o.check(count(DecisionLabel::AcceptOral) == 213, "oral count");
  o.check(count(DecisionLabel::AcceptSpotlight) == 380, "spotlight count");
  o.check(count(DecisionLabel::AcceptPoster) == 300, "poster count");
  o.check(count(DecisionLabel::Reject) == 1000, "reject count");
  o.check(count(DecisionLabel::DeskReject) == 70, "desk reject count");
  o.check(a.entries == b.entries, "not deterministic under the same seed");
  std::set<std::string> ids;
  for (const auto& e : a.entries) ids.insert(e.paper_id);
  o.check(ids.size() == a.entries.size(), "duplicate ids");
  o.check(a.warnings.empty(), "unexpected warnings");
  if (o.ok) o.detail = "1963 ids, counts 213/380/300/1000/70, deterministic";
  return o;
}

// ------------------------------------------------------------ metrics

struct RefScores {
  double p = 0, r = 0, f = 0, acc = 0, fpr = 0, fnr = 0;
};

// Brute force over the expanded (pred, truth) pairs.
RefScores reference(const std::vector<int>& preds, const std::vector<int>& truths, int k) {
  RefScores s;
  const auto n = preds.size();
  std::size_t correct = 0;
  for (std::size_t i = 0; i < n; ++i) correct += preds[i] == truths[i];
  s.acc = static_cast<double>(correct) / static_cast<double>(n);
  for (int c = 0; c < k; ++c) {
    long tp = 0, fp = 0, fn = 0;
    for (std::size_t i = 0; i < n; ++i) {
      if (preds[i] == c && truths[i] == c) ++tp;
      if (preds[i] == c && truths[i] != c) ++fp;
      if (preds[i] != c && truths[i] == c) ++fn;
    }
    const double p = tp + fp ? double(tp) / double(tp + fp) : 0.0;
    const double r = tp + fn ? double(tp) / double(tp + fn) : 0.0;
    s.p += p / k;
    s.r += r / k;
    s.f += (p + r > 0 ? 2 * p * r / (p + r) : 0.0) / k;
  }
  if (k == 2) {
    long tp = 0, fp = 0, fn = 0, tn = 0;
    for (std::size_t i = 0; i < n; ++i) {
      if (preds[i] == 1 && truths[i] == 1) ++tp;
      if (preds[i] == 1 && truths[i] == 0) ++fp;
      if (preds[i] == 0 && truths[i] == 1) ++fn;
      if (preds[i] == 0 && truths[i] == 0) ++tn;
    }
    s.fpr = fp + tn ? double(fp) / double(fp + tn) : 0.0;
    s.fnr = fn + tp ? double(fn) / double(fn + tp) : 0.0;
  }
  return s;
}

Outcome metrics_oracle() {
  Outcome o;
  std::mt19937_64 rng(2024);
  std::uniform_int_distribution<int> cell(0, 100);
  const double tol = 1e-12;
  for (int trial = 0; trial < 1000; ++trial) {
    const int k = trial % 2 == 0 ? 2 : 5;
    std::vector<int> preds, truths;
    for (int t = 0; t < k; ++t) {
      for (int p = 0; p < k; ++p) {
        const int c = cell(rng);
        for (int x = 0; x < c; ++x) {
          preds.push_back(p);
          truths.push_back(t);
        }
      }
    }
    if (preds.empty()) {
      preds.push_back(0);
      truths.push_back(0);
    }
    std::vector<std::string> names;
    for (int i = 0; i < k; ++i) names.push_back("c" + std::to_string(i));
    const auto m = metrics::confusion_indices(preds, truths, names);
    const auto prf = metrics::macro_prf(m);
    const auto ref = reference(preds, truths, k);
    const auto tag = "trial " + std::to_string(trial);
    o.check(std::abs(prf.precision - ref.p) <= tol, tag + " precision");
    o.check(std::abs(prf.recall - ref.r) <= tol, tag + " recall");
    o.check(std::abs(prf.f1 - ref.f) <= tol, tag + " f1");
    o.check(std::abs(metrics::accuracy(m) - ref.acc) <= tol, tag + " accuracy");
    // Binary rates on the 2x2 matrices directly, on 5x5 after collapsing.
    std::vector<int> bp = preds, bt = truths;
    if (k == 5) {
      for (auto& v : bp) v = static_cast<int>(to_binary(kAllLabels[static_cast<std::size_t>(v)]));
      for (auto& v : bt) v = static_cast<int>(to_binary(kAllLabels[static_cast<std::size_t>(v)]));
    }
    const auto bref = reference(bp, bt, 2);
    const auto two = k == 2 ? m : metrics::collapse_to_binary(m);
    const auto rates = metrics::binary_rates(two);
    o.check(std::abs(rates.fpr - bref.fpr) <= tol, tag + " fpr");
    o.check(std::abs(rates.fnr - bref.fnr) <= tol, tag + " fnr");
    if (k == 5) {
      const auto prf2 = metrics::macro_prf(two);
      o.check(std::abs(prf2.f1 - bref.f) <= tol, tag + " collapsed f1");
      o.check(std::abs(metrics::accuracy(two) - bref.acc) <= tol, tag + " collapsed accuracy");
    }
  }
  if (o.ok) o.detail = "1000 matrices (2x2 and 5x5) within 1e-12";
  return o;
}

double kappa_reference(const std::vector<int>& a, const std::vector<int>& b, int k) {
  const double n = static_cast<double>(a.size());
  double po = 0;
  for (std::size_t i = 0; i < a.size(); ++i) po += a[i] == b[i] ? 1.0 : 0.0;
  po /= n;
  double pe = 0;
  for (int c = 0; c < k; ++c) {
    double ca = 0, cb = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
      ca += a[i] == c;
      cb += b[i] == c;
    }
    pe += (ca / n) * (cb / n);
  }
  if (pe >= 1.0) return 1.0;
  return (po - pe) / (1 - pe);
}

Outcome kappa_oracle() {
  Outcome o;
  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 500; ++trial) {
    const int k = 2 + static_cast<int>(rng() % 4);
    const std::size_t n = 1 + rng() % 1000;
    std::vector<int> a(n), b(n);
    // Correlated raters so kappa spans a useful range.
    const double agree = static_cast<double>(rng() % 1000) / 1000.0;
    for (std::size_t i = 0; i < n; ++i) {
      a[i] = static_cast<int>(rng() % static_cast<unsigned>(k));
      b[i] = (rng() % 1000) / 1000.0 < agree ? a[i] : static_cast<int>(rng() % static_cast<unsigned>(k));
    }
    const auto tag = "trial " + std::to_string(trial);
    const double got = metrics::cohens_kappa(a, b);
    o.check(std::abs(got - kappa_reference(a, b, k)) <= 1e-12, tag + " kappa");
    o.check(got == metrics::cohens_kappa(b, a), tag + " symmetry not exact");
    o.check(metrics::cohens_kappa(a, a) == 1.0, tag + " identical sequences");
  }
  if (o.ok) o.detail = "500 sequences within 1e-12, exact symmetry, kappa(a,a)=1";
  return o;
}

// ---------------------------------------------------------------- ELO

std::string quality_review(int level) {
  return "## Summary\nThe reviewer engaged at depth level " + std::to_string(level) +
         ".\n\n## Weaknesses\n- Point one.\n";
}

int level_in(const std::string& text) {
  const auto pos = text.find("depth level ");
  return pos == std::string::npos ? -1 : text[pos + 12] - '0';
}

Outcome elo_properties() {
  Outcome o;
  o.check(std::abs(expected_score(1000, 1400) - 1.0 / 11.0) <= 1e-12, "expected_score(1000,1400)");
  o.check(k_factor(0) == 32 && k_factor(29) == 32 && k_factor(30) == 16 && k_factor(499) == 16 &&
              k_factor(500) == 10,
          "k_factor boundaries");

  RatingTable draw_table({"a", "b"});
  apply_update(draw_table, {"m", "p", "a", "b", 0, MatchOutcome::Draw, {}, ""});
  o.check(draw_table.at("a").rating == 1000.0 && draw_table.at("b").rating == 1000.0,
          "equal-rating draw moved ratings");

  // Uniform K: everyone already past 500 matches.
  std::vector<std::string> systems;
  for (int i = 0; i < 8; ++i) systems.push_back("s" + std::to_string(i));
  RatingTable table(systems);
  for (const auto& s : systems) table.at(s).matches_played = 500;
  std::mt19937_64 rng(5);
  double worst = 0;
  for (int i = 0; i < 10000; ++i) {
    const auto a = rng() % 8;
    auto b = rng() % 7;
    if (b >= a) ++b;
    const auto before = table.total();
    const auto outcome = static_cast<MatchOutcome>(rng() % 3);
    apply_update(table, {"m", "p", systems[a], systems[b], 0, outcome, {}, ""});
    worst = std::max(worst, std::abs(table.total() - before));
  }
  o.check(worst <= 1e-9, "rating sum drifted by " + std::to_string(worst));

  // Scripted judge imposing d > c > b > a via the review text only.
  const std::vector<std::string> names = {"sys_a", "sys_b", "sys_c", "sys_d"};
  arena::ReviewsBySystem reviews;
  for (int s = 0; s < 4; ++s) {
    for (int p = 0; p < 10; ++p) reviews[names[s]]["paper" + std::to_string(p)] = quality_review(s + 1);
  }
  auto judge = std::make_shared<llm::FunctionBackend>([](const llm::ChatRequest& r) {
    const auto& u = world::first_user(r);
    const auto left = u.substr(u.find("# Review on the left"), u.find("# Review on the right") - u.find("# Review on the left"));
    const auto right = u.substr(u.find("# Review on the right"));
    const int l = level_in(left), rr = level_in(right);
    return std::string("depth: compared\nverdict: ") + (l > rr ? "left" : l < rr ? "right" : "draw");
  });
  llm::Gateway gateway(judge, world::fast_gateway());
  arena::TournamentConfig tc;
  tc.budget = 600;
  tc.seed = 11;
  const auto result = arena::run_tournament(gateway, reviews, tc);
  const auto board = result.table.leaderboard();
  o.check(result.matches.size() == 600, "judged " + std::to_string(result.matches.size()));
  o.check(board.size() == 4 && board[0].system_id == "sys_d" && board[1].system_id == "sys_c" &&
              board[2].system_id == "sys_b" && board[3].system_id == "sys_a",
          "final order does not match the imposed order");
  std::map<std::pair<std::string, std::string>, int> pair_counts;
  for (const auto& m : result.matches) {
    pair_counts[std::minmax(m.left_system, m.right_system)]++;
  }
  bool balanced = pair_counts.size() == 6;
  for (const auto& [pair, n] : pair_counts) balanced = balanced && n == 100;
  o.check(balanced, "schedule not balanced over the six pairs");
  if (o.ok) {
    char buf[160];
    std::snprintf(buf, sizeof buf, "sum drift %.1e; order d>c>b>a (%.0f/%.0f/%.0f/%.0f)", worst,
                  board[0].rating, board[1].rating, board[2].rating, board[3].rating);
    o.detail = buf;
  }
  return o;
}

Outcome blinding() {
  Outcome o;
  std::vector<std::string> systems;
  for (const auto& p : shipped_personas()) systems.push_back(p.name);
  systems.push_back("meta");
  systems.push_back("human");
  systems.push_back("majority");
  BlindingTerms terms(systems);

  // Reviews that name their source in every way we can think of.
  arena::ReviewsBySystem reviews;
  const std::vector<std::string> papers = {"x1", "x2", "x3", "x4", "x5"};
  for (const auto& s : systems) {
    for (const auto& p : papers) {
      std::string t = "## Summary\nAs the " + s + " reviewer (a HUMAN-like " + s +
                      "), I think this is solid. The Metareviewer and the human panel agree.\n"
                      "**Weaknesses**\n* The " + s + "'s concern: scaling.\n";
      for (const auto& other : shipped_personas()) t += "Compare the " + other.name + " view.\n";
      reviews[s][p] = t;
    }
  }
  std::map<std::string, std::string> ctx;
  for (const auto& p : papers) ctx[p] = "Title: a human study\nWritten for the empiricist crowd.";
  auto judge = std::make_shared<llm::FunctionBackend>(
      [](const llm::ChatRequest&) { return std::string("verdict: draw"); });
  llm::Gateway gateway(judge, world::fast_gateway());
  arena::TournamentConfig tc;
  tc.budget = 1000;
  tc.seed = 3;
  const auto result = arena::run_tournament(gateway, reviews, tc, ctx);
  const auto dir = scratch("blinding");
  arena::ArenaStore store(dir);
  store.save("blind", result, json::object());
  std::size_t files = 0;
  for (const auto& e : fs::directory_iterator(dir / "blind" / "prompts")) {
    ++files;
    const auto leak = terms.find_leak(read_file(e.path()));
    o.check(leak.empty(), e.path().filename().string() + " contains '" + leak + "'");
  }
  o.check(files == 1000, "persisted " + std::to_string(files) + " judge prompts");

  std::mt19937_64 rng(17);
  int left = 0;
  for (int i = 0; i < 1000; ++i) left += blind("review A text", "review B text", rng(), terms).a_on_left;
  o.check(left >= 450 && left <= 550, "fixed input on the left " + std::to_string(left) + " times");
  if (o.ok) {
    o.detail = std::to_string(files) + " prompts clean; left " + std::to_string(left) + "/1000";
  }
  return o;
}

// ----------------------------------------------------------- pipeline

const char* kGuideline = "GUIDELINE-SENTINEL: reviewers must weigh rigor over novelty.";
const char* kAcGuideline = "AC-SENTINEL: weigh verified facts only.";

struct RunFixture {
  fs::path root;
  std::shared_ptr<llm::FunctionBackend> backend = world::scripted_backend();
  std::vector<PersonaConfig> panel;

  explicit RunFixture(const std::string& name) : root(scratch(name)) {
    const auto& pack = shipped_personas();
    for (const char* n : {"empiricist", "theorist", "critical"}) panel.push_back(find_persona(pack, n));
  }

  std::vector<PipelineRecord> run(const std::string& run_id, const AblationFlags& flags,
                                  std::size_t* calls = nullptr) {
    RunStore store(root);
    auto backend_here = world::scripted_backend();
    auto gw_cfg = world::fast_gateway();
    gw_cfg.cache_dir = store.cache_dir(run_id);
    llm::Gateway gateway(backend_here, gw_cfg);
    auto search = world::search_client();
    lit::LiteratureAgent lit(gateway, *search);
    EngineConfig cfg;
    cfg.reviewer_guidelines = kGuideline;
    cfg.ac_guidelines = kAcGuideline;
    ReviewEngine engine(gateway, cfg, &lit, &store);
    std::vector<PipelineRecord> out;
    for (int i = 0; i < 5; ++i) out.push_back(engine.run_pipeline(run_id, world::manuscript(i), panel, flags));
    if (calls) *calls = backend_here->calls();
    return out;
  }
};

Outcome end_to_end() {
  Outcome o;
  RunFixture fx("e2e");
  const AblationFlags flags{true, true, true};
  std::size_t first_calls = 0;
  const auto records = fx.run("full", flags, &first_calls);
  for (const auto& r : records) {
    const auto tag = r.paper_id + ": ";
    o.check(!r.failed && r.errors.empty(), tag + "failed");
    o.check(r.literature.has_value() && !r.literature->ranked_items.empty(), tag + "no literature");
    o.check(r.reviews_pre.size() == 3, tag + "pre reviews");
    o.check(r.rebuttal.has_value(), tag + "no rebuttal");
    o.check(r.reviews_post.size() == 3, tag + "post responses");
    o.check(r.metareview.has_value(), tag + "no metareview");
    if (!r.metareview) continue;
    std::set<std::string> covered;
    for (const auto& f : r.metareview->facts) {
      o.check(f.significance >= 0.0 && f.significance <= 1.0, tag + "significance out of range");
      covered.insert(f.source_persona);
    }
    for (const auto& rv : r.reviews_pre) o.check(covered.count(rv.persona), tag + "no fact for " + rv.persona);
  }
  std::size_t rerun_calls = 99;
  const auto again = fx.run("full", flags, &rerun_calls);
  o.check(rerun_calls == 0, "re-run made " + std::to_string(rerun_calls) + " backend calls");
  o.check(again == records, "re-run changed the records");

  // Reload from disk and evaluate.
  RunStore store(fx.root);
  std::vector<PipelineRecord> loaded;
  std::map<std::string, DecisionLabel> truth;
  for (const auto& p : store.papers("full")) {
    loaded.push_back(store.load_record("full", p));
    truth[p] = *world::manuscript(std::stoi(p.substr(1))).ground_truth;
  }
  o.check(loaded == records, "records on disk differ from returned records");
  const auto j = report::to_json(report::evaluate_records("full", loaded, truth));
  o.check(j.at("snapshots").size() == 2, "expected pre and post snapshots");
  for (const auto& snap : j.at("snapshots")) {
    bool has_meta = false;
    for (const auto& row : snap.at("systems")) {
      o.check(row.at("confusion_five_way").at("counts").size() == 5, "5-way matrix shape");
      o.check(row.at("confusion_two_way").at("counts").size() == 2, "2-way matrix shape");
      has_meta = has_meta || row.at("system") == "meta";
    }
    o.check(has_meta, "meta missing from " + snap.at("snapshot").get<std::string>());
  }
  if (o.ok) {
    o.detail = "5 records complete, " + std::to_string(first_calls) +
               " calls then 0 on re-run, pre+post matrices";
  }
  return o;
}

std::vector<std::string> reviewer_prompts(const fs::path& root, const std::string& run) {
  RunStore store(root);
  std::vector<std::string> out;
  for (const auto& p : store.papers(run)) {
    for (const auto& [path, j] : store.prompts(run, p)) {
      if (j.value("label", "").rfind("reviews_pre/", 0) == 0) out.push_back(j.dump());
    }
  }
  return out;
}

Outcome ablation_invariants() {
  Outcome o;
  RunFixture fx("ablation");
  const auto full = fx.run("ci_lit", {true, true, false});
  fx.run("phi", {false, false, false});
  fx.run("ci", {true, false, false});
  const std::string lit_summary = full.front().literature->summary;
  // Same manuscript, so the same scripted summary for paper 0 in every run.
  auto json_escaped = [](const std::string& s) { return json(s).dump().substr(1, json(s).dump().size() - 2); };
  const auto guideline = json_escaped(kGuideline);
  const auto summary = json_escaped(lit_summary);

  const auto phi = reviewer_prompts(fx.root, "phi");
  const auto ci = reviewer_prompts(fx.root, "ci");
  const auto ci_lit = reviewer_prompts(fx.root, "ci_lit");
  o.check(!phi.empty() && !ci.empty() && !ci_lit.empty(), "no persisted reviewer prompts");
  for (const auto& p : phi) {
    o.check(p.find(guideline) == std::string::npos, "phi prompt contains guidelines");
    o.check(p.find(summary) == std::string::npos, "phi prompt contains literature");
    o.check(p.find("# Literature summary") == std::string::npos, "phi prompt has a literature block");
  }
  for (const auto& p : ci) {
    o.check(p.find(guideline) != std::string::npos, "CI prompt lacks guidelines");
    o.check(p.find(summary) == std::string::npos, "CI prompt contains literature");
  }
  std::size_t with_summary = 0;
  for (const auto& p : ci_lit) {
    o.check(p.find(guideline) != std::string::npos, "CI+LitLLM prompt lacks guidelines");
    o.check(p.find("# Literature summary") != std::string::npos, "CI+LitLLM prompt lacks literature");
    with_summary += p.find(summary) != std::string::npos;
  }
  // Paper 0's summary text appears in paper 0's prompts (3 personas).
  o.check(with_summary >= 3, "literature summary text missing from CI+LitLLM prompts");
  if (o.ok) {
    o.detail = std::to_string(phi.size()) + "/" + std::to_string(ci.size()) + "/" +
               std::to_string(ci_lit.size()) + " prompts checked (phi/CI/CI+LitLLM)";
  }
  return o;
}

// ----------------------------------------------------------- ensembles

DecisionLabel majority_reference(const std::vector<DecisionLabel>& v) {
  std::array<int, 5> count{};
  for (auto l : v) ++count[static_cast<std::size_t>(ordinal(l))];
  int best = 0;
  for (int i = 1; i < 5; ++i) {
    if (count[i] > count[best]) best = i;  // strict: ties keep the lower ordinal
  }
  return from_ordinal(best);
}

Outcome ensemble_oracle() {
  Outcome o;
  std::size_t multisets = 0, orderings = 0;
  std::array<std::size_t, 6> per_size{};
  // Non-decreasing ordinal sequences enumerate multisets.
  std::function<void(std::vector<int>&, int, std::size_t)> rec = [&](std::vector<int>& cur, int lo,
                                                                      std::size_t size) {
    if (cur.size() == size) {
      ++multisets;
      ++per_size[size];
      std::vector<int> perm = cur;
      do {
        std::vector<DecisionLabel> labels;
        for (int x : perm) labels.push_back(from_ordinal(x));
        ++orderings;
        o.check(ensembles::majority_vote(labels) == majority_reference(labels), "mismatch");
      } while (std::next_permutation(perm.begin(), perm.end()));
      return;
    }
    for (int x = lo; x < 5; ++x) {
      cur.push_back(x);
      rec(cur, x, size);
      cur.pop_back();
    }
  };
  for (std::size_t size = 1; size <= 5; ++size) {
    std::vector<int> cur;
    rec(cur, 0, size);
  }
  o.check(per_size[5] == 126, "expected 126 multisets of size 5");
  if (o.ok) {
    o.detail = std::to_string(multisets) + " multisets (126 of size 5), " +
               std::to_string(orderings) + " orderings";
  }
  return o;
}

}  // namespace

int main() {
  criterion("sampler-identity", 5, sampler_identity);
  criterion("metrics-oracle", 10, metrics_oracle);
  criterion("kappa-oracle", 0, kappa_oracle);
  criterion("elo-properties", 30, elo_properties);
  criterion("blinding-randomization", 0, blinding);
  criterion("end-to-end-mock-pipeline", 60, end_to_end);
  criterion("ablation-prompt-invariants", 0, ablation_invariants);
  criterion("ensemble-oracle", 0, ensemble_oracle);
  std::printf("%d failure(s)\n", failures);
  return failures;
}
