#include "peerpanel/pipeline.hpp"

#include <algorithm>
#include <future>

#include "peerpanel/errors.hpp"
#include "peerpanel/fsutil.hpp"
#include "peerpanel/grounding.hpp"
#include "peerpanel/personas.hpp"
#include "peerpanel/replies.hpp"
#include "peerpanel/store.hpp"
#include "peerpanel/text.hpp"

namespace peerpanel {

std::string AblationFlags::label() const {
  std::string out;
  auto add = [&](const char* part) {
    if (!out.empty()) out += "+";
    out += part;
  };
  if (conference_instructions) add("CI");
  if (literature) add("LitLLM");
  if (rebuttal) add("RB");
  return out.empty() ? "phi" : out;
}

void to_json(json& j, const AblationFlags& f) {
  j = json{{"conference_instructions", f.conference_instructions},
           {"literature", f.literature},
           {"rebuttal", f.rebuttal}};
}

void from_json(const json& j, AblationFlags& f) {
  f.conference_instructions = j.value("conference_instructions", false);
  f.literature = j.value("literature", false);
  f.rebuttal = j.value("rebuttal", false);
}

void to_json(json& j, const PipelineRecord& r) {
  json kinds = json::object();
  for (const auto& [agent, kind] : r.agent_kinds) {
    kinds[agent] = kind == AgentKind::Human ? "human" : "llm";
  }
  json errors = json::array();
  for (const auto& e : r.errors) errors.push_back({{"agent", e.agent}, {"message", e.message}});
  j = json{{"run_id", r.run_id},
           {"paper_id", r.paper_id},
           {"config_hash", r.config_hash},
           {"flags", r.flags},
           {"literature", r.literature ? json(*r.literature) : json(nullptr)},
           {"reviews_pre", r.reviews_pre},
           {"rebuttal", r.rebuttal ? json(*r.rebuttal) : json(nullptr)},
           {"reviews_post", r.reviews_post},
           {"metareview", r.metareview ? json(*r.metareview) : json(nullptr)},
           {"agent_kinds", kinds},
           {"warnings", r.warnings},
           {"errors", errors},
           {"failed", r.failed}};
}

void from_json(const json& j, PipelineRecord& r) {
  r.run_id = j.at("run_id").get<std::string>();
  r.paper_id = j.at("paper_id").get<std::string>();
  r.config_hash = j.value("config_hash", "");
  r.flags = j.value("flags", json::object()).get<AblationFlags>();
  r.literature.reset();
  if (j.contains("literature") && !j.at("literature").is_null()) {
    r.literature = j.at("literature").get<LiteratureSummary>();
  }
  r.reviews_pre = j.value("reviews_pre", json::array()).get<std::vector<ReviewReport>>();
  r.rebuttal.reset();
  if (j.contains("rebuttal") && !j.at("rebuttal").is_null()) {
    r.rebuttal = j.at("rebuttal").get<Rebuttal>();
  }
  r.reviews_post = j.value("reviews_post", json::array()).get<std::vector<ReviewReport>>();
  r.metareview.reset();
  if (j.contains("metareview") && !j.at("metareview").is_null()) {
    r.metareview = j.at("metareview").get<MetaReview>();
  }
  r.agent_kinds.clear();
  const auto kinds = j.value("agent_kinds", json::object());
  for (const auto& [agent, kind] : kinds.items()) {
    r.agent_kinds[agent] = kind == "human" ? AgentKind::Human : AgentKind::Llm;
  }
  r.warnings = j.value("warnings", std::vector<std::string>{});
  r.errors.clear();
  for (const auto& e : j.value("errors", json::array())) {
    r.errors.push_back({e.value("agent", ""), e.value("message", "")});
  }
  r.failed = j.value("failed", false);
}

namespace agent_id {
std::string reviewer(const std::string& persona) { return "reviewer:" + persona; }
std::string post(const std::string& persona) { return "post:" + persona; }
}  // namespace agent_id

ReviewEngine::ReviewEngine(llm::Gateway& gateway, EngineConfig config,
                           lit::LiteratureAgent* literature, RunStore* store,
                           HumanTaskQueue* tasks)
    : gateway_(gateway),
      config_(std::move(config)),
      literature_(literature),
      store_(store),
      tasks_(tasks) {}

template <typename T, typename Parse>
T ReviewEngine::ask(llm::ChatRequest request, const std::string& label, Trace* trace,
                    Parse parse, const std::string& retry_hint) {
  const int attempts = std::max(1, config_.parse_attempts);
  std::string reason;
  for (int attempt = 0; attempt < attempts; ++attempt) {
    if (trace) trace->prompt(label, request);
    const std::string reply = gateway_.complete(request).content;
    try {
      return parse(reply);
    } catch (const ParseFailure& e) {
      reason = e.what();
      if (trace) trace->warn(label + ": unparseable reply (" + reason + ")");
      request.messages.push_back({llm::Role::Assistant, reply});
      request.messages.push_back(
          {llm::Role::User, retry_hint.empty() ? prompts::parse_retry(reason)
                                               : retry_hint + " (" + reason + ")"});
    }
  }
  throw ParseFailure(label + ": " + reason + " after " + std::to_string(attempts) +
                     " attempts");
}

ReviewReport ReviewEngine::run_reviewer(const Manuscript& m, const PersonaConfig& persona,
                                        const AblationFlags& flags,
                                        const LiteratureSummary* lit,
                                        const std::optional<std::string>& guidelines,
                                        Trace* trace) {
  if (flags.literature && lit == nullptr) {
    throw PreconditionError("literature flag set but no literature summary given");
  }
  if (flags.conference_instructions && !guidelines) {
    throw PreconditionError("conference-instructions flag set but no guidelines given");
  }
  const LiteratureSummary* lit_in = flags.literature ? lit : nullptr;
  const std::optional<std::string> guidelines_in =
      flags.conference_instructions ? guidelines : std::nullopt;
  const std::string label = "reviews_pre/" + persona.name;
  const auto base = prompts::make_request(config_.llm, persona.system_prompt,
                                          prompts::reviewer_report(m, guidelines_in, lit_in));
  auto parse = [&](const std::string& reply) {
    return replies::parse_review(reply, persona.name, m.paper_id);
  };

  auto report = ask<ReviewReport>(base, label, trace, parse, "");
  report.grounded = is_grounded(report, m, lit_in);
  int reruns = 0;
  while (!report.grounded && reruns < config_.grounding_retries) {
    auto strict = base;
    strict.messages.front().content = prompts::strict_grounding_system(
        persona.system_prompt, config_.strict_grounding_instruction, reruns,
        verify_grounding(report, m, lit_in));
    ++reruns;
    report = ask<ReviewReport>(strict, label, trace, parse, "");
    report.grounded = is_grounded(report, m, lit_in);
  }
  report.retry_count = reruns;
  if (!report.grounded && trace) {
    trace->warn(label + ": still ungrounded after " + std::to_string(reruns) +
                " stricter reruns; report kept");
  }
  return report;
}

Rebuttal ReviewEngine::run_author(const Manuscript& m, const std::vector<ReviewReport>& reviews,
                                  const LiteratureSummary* lit, const std::string& config_id,
                                  Trace* trace) {
  if (reviews.empty()) throw PreconditionError("author agent needs at least one review");
  std::vector<std::string> rendered;
  for (const auto& r : reviews) rendered.push_back(render_review(r));

  auto invalid_citations = [&](const Rebuttal& rb) {
    std::vector<std::string> bad;
    for (const auto& c : rb.cited_claims) {
      if (c.kind == ClaimKind::ReviewerClaim) {
        const bool found = std::any_of(rendered.begin(), rendered.end(), [&](const auto& text) {
          return text::contains_normalized(text, c.value);
        });
        if (!found) bad.push_back(c.value);
      } else {
        const bool found =
            lit != nullptr &&
            std::any_of(lit->ranked_items.begin(), lit->ranked_items.end(),
                        [&](const auto& item) { return item.item_id == c.value; });
        if (!found) bad.push_back(c.value);
      }
    }
    return bad;
  };
  auto parse = [&](const std::string& reply) {
    return replies::parse_rebuttal(reply, m.paper_id, config_id);
  };

  std::vector<std::string> bad;
  Rebuttal rebuttal;
  for (int attempt = 0; attempt < 2; ++attempt) {
    auto request = prompts::make_request(
        config_.llm, "You are the authors of the manuscript under review.",
        prompts::author_rebuttal(m, reviews, lit, bad));
    rebuttal = ask<Rebuttal>(request, "rebuttal", trace, parse, "");
    rebuttal.regenerations = attempt;
    bad = invalid_citations(rebuttal);
    if (rebuttal.cited_claims.empty()) bad.push_back("(no citations)");
    if (bad.empty()) return rebuttal;
    if (trace) {
      trace->warn("rebuttal: " + std::to_string(bad.size()) + " citation(s) failed verification");
    }
  }
  if (rebuttal.cited_claims.empty()) {
    throw ParseFailure("rebuttal cites no reviewer claim or literature item");
  }
  rebuttal.flagged = true;
  return rebuttal;
}

ReviewReport ReviewEngine::run_post_rebuttal(const ReviewReport& report, const Rebuttal& rebuttal,
                                             const PersonaConfig& persona,
                                             const AblationFlags& flags, Trace* trace) {
  if (!flags.rebuttal) throw PreconditionError("post-rebuttal response without the rebuttal flag");
  auto request = prompts::make_request(config_.llm, persona.system_prompt,
                                       prompts::post_rebuttal_response(report, rebuttal));
  const auto previous = report.recommendation;
  auto parsed = ask<replies::PostRebuttal>(
      request, "reviews_post/" + persona.name, trace,
      [&](const std::string& reply) { return replies::parse_post_rebuttal(reply, previous); },
      "End your reply with one line such as \"maintain: Reject\" or \"upgrade to Accept "
      "(Poster)\".");
  ReviewReport out = report;
  out.stage = ReviewStage::PostRebuttal;
  out.response = parsed.response;
  out.recommendation = parsed.recommendation;
  return out;
}

MetaReview ReviewEngine::run_metareview(const std::vector<ReviewReport>& reviews_pre,
                                        const Rebuttal* rebuttal,
                                        const std::vector<ReviewReport>& reviews_post,
                                        const Manuscript& m, const LiteratureSummary* lit,
                                        const std::optional<std::string>& ac_guidelines,
                                        Trace* trace) {
  if (reviews_pre.empty()) throw PreconditionError("metareview needs at least one review");
  const auto& meta_persona = find_persona(shipped_personas(), "metareviewer");

  auto facts_request = prompts::make_request(config_.llm, meta_persona.system_prompt,
                                             prompts::fact_extraction(m, reviews_pre));
  const auto raw = ask<std::vector<replies::RawFact>>(
      facts_request, "metareview/facts", trace,
      [](const std::string& reply) { return replies::parse_facts(reply); }, "");

  MetaReview meta;
  std::vector<FactRecord> supported;
  for (const auto& f : raw) {
    FactRecord rec;
    rec.claim = f.claim;
    rec.source_persona = f.source_persona;
    rec.quote = f.quote;
    rec.significance = std::clamp(f.significance, 0.0, 1.0);
    if (rec.significance != f.significance && trace) {
      trace->warn("metareview: significance " + std::to_string(f.significance) +
                  " clamped to [0,1] for claim '" + f.claim + "'");
    }
    rec.verdict = verify_fact_quote(f.quote, m, lit);
    if (rec.verdict != FactVerdict::Unsupported) supported.push_back(rec);
    meta.facts.push_back(std::move(rec));
  }

  auto request = prompts::make_request(
      config_.llm, meta_persona.system_prompt,
      prompts::metareview(m, reviews_pre, rebuttal, reviews_post, supported, ac_guidelines, lit));
  const auto decided = ask<replies::MetaDecision>(
      request, "metareview/decision", trace,
      [](const std::string& reply) { return replies::parse_metareview(reply); }, "");
  meta.sections = decided.sections;
  meta.decision = decided.decision;
  return meta;
}

std::string ReviewEngine::config_hash(const std::vector<PersonaConfig>& panel,
                                      const AblationFlags& flags) const {
  json personas = json::array();
  for (const auto& p : panel) personas.push_back({{"name", p.name}, {"prompt", p.system_prompt}});
  auto text_hash = [](const std::optional<std::string>& t) {
    return t ? json(sha256_hex(*t)) : json(nullptr);
  };
  const json identity = {
      {"panel", personas},
      {"flags", flags},
      {"llm",
       {{"model", config_.llm.model},
        {"temperature", config_.llm.temperature},
        {"max_tokens", config_.llm.max_tokens}}},
      {"grounding_retries", config_.grounding_retries},
      {"parse_attempts", config_.parse_attempts},
      {"strict_grounding_instruction", config_.strict_grounding_instruction},
      {"reviewer_guidelines", flags.conference_instructions ? text_hash(config_.reviewer_guidelines)
                                                            : json(nullptr)},
      {"ac_guidelines",
       flags.conference_instructions ? text_hash(config_.ac_guidelines) : json(nullptr)}};
  return sha256_hex(identity.dump()).substr(0, 16);
}

json ReviewEngine::await_human(const std::string& run_id, const std::string& paper_id,
                               const std::string& agent, const std::string& stage,
                               json context) {
  if (tasks_ == nullptr) {
    throw PreconditionError("agent '" + agent + "' is human but no task queue is attached");
  }
  const auto id = tasks_->post(run_id, paper_id, agent, stage, std::move(context));
  auto submission = tasks_->wait(id, config_.human_timeout);
  if (!submission) throw HumanTaskTimeout("human task " + id + " for " + agent + " timed out");
  return *submission;
}

namespace {

// Writes the prompts collected since the last flush.
class PromptFlusher {
 public:
  PromptFlusher(RunStore* store, std::string run, std::string paper, const Trace& trace)
      : store_(store), run_(std::move(run)), paper_(std::move(paper)), trace_(trace) {}

  void flush() {
    if (!store_) return;
    const auto entries = trace_.prompts();
    for (; written_ < entries.size(); ++written_) {
      const auto& e = entries[written_];
      store_->save_prompt(run_, paper_, e.label, counters_[e.label]++, e.request);
    }
  }

 private:
  RunStore* store_;
  std::string run_;
  std::string paper_;
  const Trace& trace_;
  std::size_t written_ = 0;
  std::map<std::string, int> counters_;
};

json manuscript_context(const Manuscript& m) {
  return {{"paper_id", m.paper_id}, {"title", m.title}, {"body", m.body}};
}

}  // namespace

PipelineRecord ReviewEngine::run_pipeline(const std::string& run_id, const Manuscript& m,
                                          const std::vector<PersonaConfig>& panel,
                                          const AblationFlags& flags,
                                          const HumanOverrides& overrides) {
  if (panel.empty()) throw PreconditionError("reviewer panel is empty");
  if (flags.conference_instructions && !config_.reviewer_guidelines) {
    throw PreconditionError("conference-instructions flag set but no reviewer guidelines configured");
  }
  PipelineRecord record;
  record.run_id = run_id;
  record.paper_id = m.paper_id;
  record.flags = flags;
  record.config_hash = config_hash(panel, flags);
  if (store_) {
    check_path_component(run_id);
    if (auto existing = store_->load_index(run_id, m.paper_id)) {
      const auto previous = existing->value("config_hash", "");
      if (previous != record.config_hash) {
        throw ConfigError("run '" + run_id + "' already holds paper '" + m.paper_id +
                          "' under a different configuration (" + previous + ")");
      }
      // Stages loaded from disk make no calls; keep what they warned about.
      record.warnings = existing->value("warnings", std::vector<std::string>{});
    }
  }

  auto kind_of = [&](const std::string& agent) {
    auto it = overrides.find(agent);
    const auto kind = it == overrides.end() ? AgentKind::Llm : it->second;
    record.agent_kinds[agent] = kind;
    return kind;
  };
  Trace trace;
  PromptFlusher flusher(store_, run_id, m.paper_id, trace);
  std::mutex record_mu;
  auto add_error = [&](const std::string& agent, const std::string& message) {
    std::lock_guard lock(record_mu);
    record.errors.push_back({agent, message});
  };
  auto finish = [&] {
    flusher.flush();
    for (auto& w : trace.warnings()) {
      if (std::find(record.warnings.begin(), record.warnings.end(), w) == record.warnings.end()) {
        record.warnings.push_back(std::move(w));
      }
    }
    if (store_) store_->save_index(record);
    return record;
  };

  // Literature
  const LiteratureSummary* lit = nullptr;
  if (flags.literature) {
    const auto kind = kind_of(agent_id::kLiterature);
    try {
      if (store_) record.literature = store_->load_literature(run_id, m.paper_id);
      if (!record.literature) {
        if (kind == AgentKind::Human) {
          record.literature = await_human(run_id, m.paper_id, agent_id::kLiterature, "literature",
                                          manuscript_context(m))
                                  .get<LiteratureSummary>();
        } else {
          if (!literature_) throw PreconditionError("literature flag set but no literature agent");
          record.literature = literature_->build(m, &trace);
        }
        if (store_) store_->save_literature(run_id, *record.literature);
      }
      lit = &*record.literature;
    } catch (const std::exception& e) {
      add_error(agent_id::kLiterature, e.what());
      record.failed = true;
      return finish();
    }
  }
  flusher.flush();

  // Persona reviews, concurrently.
  std::vector<AgentKind> kinds;
  for (const auto& p : panel) kinds.push_back(kind_of(agent_id::reviewer(p.name)));
  std::vector<std::future<std::optional<ReviewReport>>> pending;
  for (std::size_t i = 0; i < panel.size(); ++i) {
    pending.push_back(std::async(std::launch::async, [&, i]() -> std::optional<ReviewReport> {
      const auto& persona = panel[i];
      const auto agent = agent_id::reviewer(persona.name);
      try {
        if (store_) {
          if (auto stored = store_->load_review(run_id, m.paper_id, ReviewStage::PreRebuttal,
                                                persona.name)) {
            return stored;
          }
        }
        ReviewReport report;
        if (kinds[i] == AgentKind::Human) {
          auto ctx = manuscript_context(m);
          ctx["persona"] = persona.name;
          if (flags.conference_instructions) ctx["guidelines"] = *config_.reviewer_guidelines;
          if (lit) ctx["literature"] = *lit;
          report = await_human(run_id, m.paper_id, agent, "reviewer", std::move(ctx))
                       .get<ReviewReport>();
          report.grounded = is_grounded(report, m, flags.literature ? lit : nullptr);
        } else {
          report = run_reviewer(m, persona, flags, lit, config_.reviewer_guidelines, &trace);
        }
        if (store_) store_->save_review(run_id, report);
        return report;
      } catch (const std::exception& e) {
        add_error(agent, e.what());
        return std::nullopt;
      }
    }));
  }
  for (auto& f : pending) {
    if (auto r = f.get()) record.reviews_pre.push_back(std::move(*r));
  }
  flusher.flush();
  if (record.reviews_pre.size() < config_.min_reviews) {
    add_error("pipeline", "only " + std::to_string(record.reviews_pre.size()) +
                              " review(s) succeeded; at least " +
                              std::to_string(config_.min_reviews) + " are required");
    record.failed = true;
    return finish();
  }

  // Rebuttal and post-rebuttal responses.
  if (flags.rebuttal) {
    const auto kind = kind_of(agent_id::kAuthor);
    try {
      if (store_) record.rebuttal = store_->load_rebuttal(run_id, m.paper_id);
      if (!record.rebuttal) {
        if (kind == AgentKind::Human) {
          auto ctx = manuscript_context(m);
          ctx["reviews"] = record.reviews_pre;
          ctx["config_id"] = record.config_hash;
          record.rebuttal =
              await_human(run_id, m.paper_id, agent_id::kAuthor, "author", std::move(ctx))
                  .get<Rebuttal>();
        } else {
          record.rebuttal = run_author(m, record.reviews_pre, lit, record.config_hash, &trace);
        }
        if (store_) store_->save_rebuttal(run_id, *record.rebuttal);
      }
    } catch (const std::exception& e) {
      add_error(agent_id::kAuthor, e.what());
    }
    flusher.flush();

    if (record.rebuttal) {
      std::vector<AgentKind> post_kinds;
      for (const auto& r : record.reviews_pre) post_kinds.push_back(kind_of(agent_id::post(r.persona)));
      std::vector<std::future<std::optional<ReviewReport>>> posts;
      for (std::size_t i = 0; i < record.reviews_pre.size(); ++i) {
        posts.push_back(std::async(std::launch::async, [&, i]() -> std::optional<ReviewReport> {
          const auto& pre = record.reviews_pre[i];
          const auto agent = agent_id::post(pre.persona);
          try {
            if (store_) {
              if (auto stored = store_->load_review(run_id, m.paper_id,
                                                    ReviewStage::PostRebuttal, pre.persona)) {
                return stored;
              }
            }
            ReviewReport post;
            if (post_kinds[i] == AgentKind::Human) {
              auto ctx = manuscript_context(m);
              ctx["persona"] = pre.persona;
              ctx["review"] = pre;
              ctx["rebuttal"] = *record.rebuttal;
              post = await_human(run_id, m.paper_id, agent, "post_rebuttal", std::move(ctx))
                         .get<ReviewReport>();
            } else {
              const auto* persona = [&]() -> const PersonaConfig* {
                for (const auto& p : panel) {
                  if (p.name == pre.persona) return &p;
                }
                return nullptr;
              }();
              if (!persona) throw UnknownPersona(pre.persona);
              post = run_post_rebuttal(pre, *record.rebuttal, *persona, flags, &trace);
            }
            if (store_) store_->save_review(run_id, post);
            return post;
          } catch (const std::exception& e) {
            add_error(agent, e.what());
            return std::nullopt;
          }
        }));
      }
      for (auto& f : posts) {
        if (auto r = f.get()) record.reviews_post.push_back(std::move(*r));
      }
      flusher.flush();
    }
  }

  // Metareview.
  {
    const auto kind = kind_of(agent_id::kMeta);
    try {
      if (store_) record.metareview = store_->load_metareview(run_id, m.paper_id);
      if (!record.metareview) {
        const std::optional<std::string> ac =
            flags.conference_instructions ? config_.ac_guidelines : std::nullopt;
        if (kind == AgentKind::Human) {
          auto ctx = manuscript_context(m);
          ctx["reviews_pre"] = record.reviews_pre;
          ctx["reviews_post"] = record.reviews_post;
          if (record.rebuttal) ctx["rebuttal"] = *record.rebuttal;
          if (ac) ctx["guidelines"] = *ac;
          record.metareview =
              await_human(run_id, m.paper_id, agent_id::kMeta, "metareview", std::move(ctx))
                  .get<MetaReview>();
        } else {
          record.metareview = run_metareview(record.reviews_pre,
                                             record.rebuttal ? &*record.rebuttal : nullptr,
                                             record.reviews_post, m, lit, ac, &trace);
        }
        if (store_) store_->save_metareview(run_id, m.paper_id, *record.metareview);
      }
    } catch (const std::exception& e) {
      add_error(agent_id::kMeta, e.what());
      record.failed = true;
    }
  }
  return finish();
}

}  // namespace peerpanel
