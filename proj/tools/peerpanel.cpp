// Operator entry point: curate, run, evaluate, arena, report, serve.

#include <CLI11.hpp>

#include <csignal>
#include <cstdlib>
#include <fstream>
#include <iostream>

#include "peerpanel/arena.hpp"
#include "peerpanel/config.hpp"
#include "peerpanel/curator.hpp"
#include "peerpanel/errors.hpp"
#include "peerpanel/fsutil.hpp"
#include "peerpanel/personas.hpp"
#include "peerpanel/report.hpp"
#include "peerpanel/service.hpp"
#include "peerpanel/store.hpp"
#include "peerpanel/text.hpp"

namespace fs = std::filesystem;
using namespace peerpanel;

namespace {

json read_json_file(const fs::path& path) {
  try {
    return json::parse(read_file(path));
  } catch (const json::exception& e) {
    throw SchemaError(path.string() + ": " + e.what());
  }
}

void write_output(const std::string& out, const std::string& contents) {
  if (out.empty() || out == "-") {
    std::cout << contents;
  } else {
    write_file_atomic(out, contents);
    std::cerr << "wrote " << out << "\n";
  }
}

std::pair<std::string, int> split_addr(const std::string& addr) {
  const auto colon = addr.rfind(':');
  if (colon == std::string::npos) throw ConfigError("--serve-addr wants host:port");
  return {addr.substr(0, colon), std::stoi(addr.substr(colon + 1))};
}

std::string env(const char* name) {
  const char* v = std::getenv(name);
  return v ? v : "";
}

std::map<std::string, Manuscript> load_corpus(const fs::path& path) {
  auto result = curator::ingest_file(path);
  for (const auto& s : result.skipped) std::cerr << "corpus: skipped " << s << "\n";
  std::map<std::string, Manuscript> out;
  for (auto& m : result.corpus) out.emplace(m.paper_id, std::move(m));
  return out;
}

// Ground truth from a manifest (paper_id/label lines) or an ingest dump.
std::map<std::string, DecisionLabel> load_truth(const fs::path& path) {
  std::map<std::string, DecisionLabel> truth;
  try {
    for (const auto& e : curator::read_manifest(path).entries) truth[e.paper_id] = e.label;
    if (!truth.empty()) return truth;
  } catch (const SchemaError&) {
  }
  for (const auto& [id, m] : load_corpus(path)) {
    if (m.ground_truth) truth[id] = *m.ground_truth;
  }
  return truth;
}

// ---------------------------------------------------------------- curate

struct CurateArgs {
  std::string input;
  std::string out = "manifest.jsonl";
  std::uint64_t seed = 0;
};

int cmd_curate(const CurateArgs& a) {
  auto ingested = curator::ingest_file(a.input);
  for (const auto& s : ingested.skipped) std::cerr << "skipped " << s << "\n";
  const auto manifest = curator::stratified_sample(ingested.corpus, a.seed);
  for (const auto& w : manifest.warnings) std::cerr << "warning: " << w << "\n";
  curator::export_manifest(manifest, a.out);
  std::cout << manifest.entries.size() << " papers from " << ingested.corpus.size()
            << " ingested (" << ingested.skipped.size() << " skipped)\n";
  for (const auto& [label, n] : manifest.label_counts()) {
    std::cout << "  " << label << ": " << n << "\n";
  }
  std::cout << "wrote " << a.out << "\n";
  return 0;
}

// ------------------------------------------------------------------- run

struct RunArgs {
  std::string config;
  std::string manifest;
  std::string run_id;
  std::string mock;
  std::string out;
  std::string corpus;
  std::string serve_addr;
  std::string arenas = "arenas";
};

int cmd_run(const RunArgs& a) {
  auto cfg = load_config(a.config);
  if (!a.run_id.empty()) cfg.run_id = a.run_id;
  if (!a.out.empty()) cfg.runs_dir = a.out;
  if (!a.corpus.empty()) cfg.corpus = a.corpus;
  if (!cfg.corpus) throw ConfigError("no corpus: set \"corpus\" in the config or pass --corpus");

  const auto pack = cfg.personas ? load_persona_pack(*cfg.personas) : shipped_personas();
  std::vector<PersonaConfig> panel;
  if (cfg.panel.empty()) {
    for (const auto& p : pack) {
      if (p.category != PersonaCategory::Meta) panel.push_back(p);
    }
  } else {
    for (const auto& name : cfg.panel) panel.push_back(find_persona(pack, name));
  }

  const auto corpus = load_corpus(*cfg.corpus);
  const auto manifest = curator::read_manifest(a.manifest);
  std::vector<Manuscript> papers;
  for (const auto& e : manifest.entries) {
    auto it = corpus.find(e.paper_id);
    if (it == corpus.end()) throw PreconditionError("paper " + e.paper_id + " not in corpus");
    papers.push_back(it->second);
  }

  RunStore store(cfg.runs_dir);
  check_path_component(cfg.run_id);

  std::shared_ptr<llm::Backend> backend;
  std::shared_ptr<lit::SearchClient> search;
  if (!a.mock.empty()) {
    const auto script = read_json_file(a.mock);
    backend = llm::MockBackend::from_json(script);
    search = lit::MockSearchClient::from_json(script.value("search", json::object()));
  } else {
    backend = std::make_shared<llm::HttpBackend>(backend_config(cfg));
    search = std::make_shared<lit::SemanticScholarClient>(search_config(cfg));
  }
  llm::Gateway gateway(backend, gateway_config(cfg, store.cache_dir(cfg.run_id)));
  lit::LiteratureAgent literature(gateway, *search, literature_config(cfg));
  HumanTaskQueue tasks;
  ReviewEngine engine(gateway, engine_config(cfg), &literature, &store, &tasks);

  std::unique_ptr<arena::ArenaStore> arenas;
  std::unique_ptr<Service> service;
  if (!a.serve_addr.empty()) {
    const auto [host, port] = split_addr(a.serve_addr);
    arenas = std::make_unique<arena::ArenaStore>(a.arenas);
    service = std::make_unique<Service>(store, *arenas, tasks, env("PEERPANEL_SERVE_TOKEN"));
    const int bound = service->start(host, port);
    std::cerr << "serving human tasks on " << host << ":" << bound << "\n";
  } else if (!cfg.human_agents.empty()) {
    std::cerr << "warning: human agents configured without --serve-addr; their tasks can only "
                 "time out\n";
  }

  const auto overrides = human_overrides(cfg);
  std::size_t failed = 0;
  for (const auto& m : papers) {
    const auto rec = engine.run_pipeline(cfg.run_id, m, panel, cfg.flags, overrides);
    if (rec.failed) ++failed;
    std::cout << m.paper_id << ": "
              << (rec.failed ? "FAILED"
                             : (rec.metareview ? std::string(to_string(rec.metareview->decision))
                                               : std::string("incomplete")))
              << "\n";
    for (const auto& e : rec.errors) std::cerr << "  " << e.agent << ": " << e.message << "\n";
  }
  const auto stats = gateway.stats();
  std::cout << papers.size() << " papers, " << failed << " failed; backend calls "
            << stats.backend_calls << ", cache hits " << stats.cache_hits << ", retries "
            << stats.retries << "\n";
  return failed ? 3 : 0;
}

// -------------------------------------------------------------- evaluate

struct EvaluateArgs {
  std::string run_id;
  std::string against;
  std::string out;
  std::string runs_dir = "runs";
  std::string table;
};

int cmd_evaluate(const EvaluateArgs& a) {
  RunStore store(a.runs_dir);
  check_path_component(a.run_id);
  std::vector<PipelineRecord> records;
  for (const auto& p : store.papers(a.run_id)) records.push_back(store.load_record(a.run_id, p));
  if (records.empty()) throw PreconditionError("run " + a.run_id + " has no records");
  const auto truth = load_truth(a.against);
  const auto report = report::evaluate_records(a.run_id, records, truth);
  const auto j = report::to_json(report);
  for (const auto& w : report.warnings) std::cerr << "warning: " << w << "\n";
  write_output(a.out, j.dump(2) + "\n");
  const auto table = report::render_table(j);
  if (!a.table.empty()) write_file_atomic(a.table, table);
  if (!a.out.empty() && a.out != "-") std::cout << table;
  return 0;
}

// ----------------------------------------------------------------- arena

struct ArenaArgs {
  std::string run_id;
  std::string arena_id;
  std::string runs_dir = "runs";
  std::string out = "arenas";
  std::string config;
  std::string mock;
  std::string corpus;
  std::string human_reviews;
  std::string snapshot = "pre";
  std::size_t budget = 100;
  std::uint64_t seed = 0;
};

int cmd_arena(const ArenaArgs& a) {
  RunConfig cfg;
  if (!a.config.empty()) cfg = load_config(a.config);
  if (!a.corpus.empty()) cfg.corpus = a.corpus;
  RunStore store(a.runs_dir);
  check_path_component(a.run_id);
  const bool post = a.snapshot == "post";

  // Each persona's report, the metareview, and optionally human reviews.
  arena::ReviewsBySystem reviews;
  for (const auto& p : store.papers(a.run_id)) {
    const auto rec = store.load_record(a.run_id, p);
    for (const auto& r : post && !rec.reviews_post.empty() ? rec.reviews_post : rec.reviews_pre) {
      reviews[r.persona][p] = render_review(r);
    }
    if (rec.metareview) reviews["meta"][p] = render_metareview(*rec.metareview);
  }
  if (!a.human_reviews.empty()) {
    const auto human = read_json_file(a.human_reviews);
    for (const auto& [paper, text] : human.items()) {
      reviews["human"][paper] = text.is_array() ? text.at(0).get<std::string>()
                                                : text.get<std::string>();
    }
  }

  std::map<std::string, std::string> context;
  if (cfg.corpus) {
    for (const auto& [id, m] : load_corpus(*cfg.corpus)) {
      context[id] = "Title: " + m.title + "\n\n" + m.body.substr(0, 2000);
    }
  }

  std::shared_ptr<llm::Backend> backend;
  if (!a.mock.empty()) {
    backend = llm::MockBackend::from_json(read_json_file(a.mock));
  } else {
    backend = std::make_shared<llm::HttpBackend>(backend_config(cfg));
  }
  const std::string arena_id = a.arena_id.empty() ? a.run_id + "-arena" : a.arena_id;
  check_path_component(arena_id);
  llm::Gateway gateway(backend, gateway_config(cfg, fs::path(a.out) / arena_id / "cache"));

  arena::TournamentConfig tc;
  tc.budget = a.budget;
  tc.seed = a.seed;
  tc.judge.llm = cfg.llm;
  tc.judge.parse_attempts = cfg.parse_attempts;
  tc.workers = cfg.parallelism;
  const auto result = arena::run_tournament(gateway, reviews, tc, context);
  for (const auto& d : result.discarded) std::cerr << "discarded " << d << "\n";

  arena::ArenaStore arenas(a.out);
  arenas.save(arena_id, result,
              {{"run_id", a.run_id}, {"budget", a.budget}, {"seed", a.seed},
               {"snapshot", a.snapshot}, {"model", cfg.llm.model}});
  std::cout << arena::render_leaderboard(result.table) << result.matches.size()
            << " matches judged, " << result.discarded.size() << " discarded, "
            << result.qc_sample.size() << " sampled for QC -> " << (fs::path(a.out) / arena_id)
            << "\n";
  return 0;
}

// ---------------------------------------------------------------- report

struct ReportArgs {
  std::string input;
  std::string arena_id;
  std::string arenas = "arenas";
  std::string out;
};

int cmd_report(const ReportArgs& a) {
  auto evaluation = read_json_file(a.input);
  std::map<std::string, double> elo;
  if (!a.arena_id.empty()) {
    arena::ArenaStore arenas(a.arenas);
    const auto rep = arenas.report(a.arena_id);
    if (!rep) throw IoError("no arena " + a.arena_id + " under " + a.arenas);
    for (const auto& e : rep->at("ratings")) {
      elo[e.at("system_id").get<std::string>()] = e.at("rating").get<double>();
    }
    for (auto& snap : evaluation["snapshots"]) {
      for (auto& row : snap["systems"]) {
        auto it = elo.find(row.value("system", ""));
        if (it != elo.end()) row["elo"] = it->second;
      }
    }
    // Systems judged in the arena but not evaluated (e.g. human reviews).
    for (const auto& [system, rating] : elo) {
      bool listed = false;
      for (const auto& row : evaluation["snapshots"][0]["systems"]) {
        listed = listed || row.value("system", "") == system;
      }
      if (!listed) std::cerr << "note: " << system << " has ELO " << rating << " but no metrics\n";
    }
  }
  const auto table = report::render_table(evaluation, elo);
  std::cout << table;
  if (!a.out.empty()) write_file_atomic(a.out, evaluation.dump(2) + "\n");
  return 0;
}

// ----------------------------------------------------------------- serve

struct ServeArgs {
  std::string addr = "127.0.0.1:8080";
  std::string runs_dir = "runs";
  std::string arenas = "arenas";
};

int cmd_serve(const ServeArgs& a) {
  RunStore store(a.runs_dir);
  arena::ArenaStore arenas(a.arenas);
  HumanTaskQueue tasks;
  Service service(store, arenas, tasks, env("PEERPANEL_SERVE_TOKEN"));
  const auto [host, port] = split_addr(a.addr);
  std::cerr << "listening on " << host << ":" << port << "\n";
  service.listen(host, port);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Staged multi-agent peer review: pipeline, metrics and ELO arena"};
  app.require_subcommand(1);

  CurateArgs curate;
  auto* c = app.add_subcommand("curate", "Ingest a decision dump and draw the stratified sample");
  c->add_option("--input", curate.input, "JSON-lines submission dump")->required();
  c->add_option("--out", curate.out, "Manifest path");
  c->add_option("--seed", curate.seed);

  RunArgs run;
  auto* r = app.add_subcommand("run", "Run the review pipeline over a manifest");
  r->add_option("--config", run.config)->required();
  r->add_option("--manifest", run.manifest)->required();
  r->add_option("--run-id", run.run_id, "Overrides config run_id");
  r->add_option("--mock", run.mock, "Offline mock script instead of the HTTP backend");
  r->add_option("--out", run.out, "Runs directory (overrides config runs_dir)");
  r->add_option("--corpus", run.corpus, "Corpus JSON lines with paper bodies");
  r->add_option("--serve-addr", run.serve_addr, "Serve the task API while running (host:port)");
  r->add_option("--arenas", run.arenas);

  EvaluateArgs evaluate;
  auto* e = app.add_subcommand("evaluate", "Score a run against ground truth");
  e->add_option("--run-id,--run", evaluate.run_id)->required();
  e->add_option("--against", evaluate.against, "Manifest or corpus with decisions")->required();
  e->add_option("--out", evaluate.out, "Report JSON (stdout when unset)");
  e->add_option("--runs-dir", evaluate.runs_dir);
  e->add_option("--table", evaluate.table, "Also write the text table here");

  ArenaArgs arena_args;
  auto* ar = app.add_subcommand("arena", "Blinded pairwise ELO tournament over a run's reviews");
  ar->add_option("--run-id,--run", arena_args.run_id)->required();
  ar->add_option("--arena-id", arena_args.arena_id);
  ar->add_option("--runs-dir", arena_args.runs_dir);
  ar->add_option("--out", arena_args.out, "Arenas directory");
  ar->add_option("--config", arena_args.config);
  ar->add_option("--mock", arena_args.mock);
  ar->add_option("--corpus", arena_args.corpus);
  ar->add_option("--human-reviews", arena_args.human_reviews, "JSON {paper_id: review text}");
  ar->add_option("--snapshot", arena_args.snapshot)->check(CLI::IsMember({"pre", "post"}));
  ar->add_option("--budget", arena_args.budget)->check(CLI::PositiveNumber);
  ar->add_option("--seed", arena_args.seed);

  ReportArgs report_args;
  auto* rp = app.add_subcommand("report", "Metrics table merged with arena ratings");
  rp->add_option("--input", report_args.input, "evaluate output")->required();
  rp->add_option("--arena-id", report_args.arena_id);
  rp->add_option("--arenas", report_args.arenas);
  rp->add_option("--out", report_args.out, "Merged JSON");

  ServeArgs serve;
  auto* s = app.add_subcommand("serve", "HTTP API for runs, human tasks and QC");
  s->add_option("--serve-addr", serve.addr);
  s->add_option("--runs-dir", serve.runs_dir);
  s->add_option("--arenas", serve.arenas);

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& ex) {
    return app.exit(ex);
  } catch (const CLI::ParseError& ex) {
    app.exit(ex);
    return 2;
  }

  try {
    if (*c) return cmd_curate(curate);
    if (*r) return cmd_run(run);
    if (*e) return cmd_evaluate(evaluate);
    if (*ar) return cmd_arena(arena_args);
    if (*rp) return cmd_report(report_args);
    if (*s) return cmd_serve(serve);
  } catch (const Error& ex) {
    std::cerr << "error: " << ex.what() << "\n";
    return 1;
  } catch (const std::exception& ex) {
    std::cerr << "error: " << ex.what() << "\n";
    return 1;
  }
  return 2;
}
