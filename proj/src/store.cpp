#include "peerpanel/store.hpp"

#include <algorithm>

#include "peerpanel/errors.hpp"
#include "peerpanel/fsutil.hpp"

namespace peerpanel {

namespace fs = std::filesystem;

void check_path_component(const std::string& id) {
  if (id.empty() || id == "." || id == ".." || id.find('/') != std::string::npos ||
      id.find('\\') != std::string::npos || id.find('\0') != std::string::npos) {
    throw PreconditionError("'" + id + "' cannot be used as a path component");
  }
}

RunStore::RunStore(fs::path root) : root_(std::move(root)) {}

fs::path RunStore::run_dir(const std::string& run_id) const {
  check_path_component(run_id);
  return root_ / run_id;
}

fs::path RunStore::paper_dir(const std::string& run_id, const std::string& paper_id) const {
  check_path_component(paper_id);
  if (paper_id == "cache") throw PreconditionError("paper id 'cache' is reserved");
  return run_dir(run_id) / paper_id;
}

fs::path RunStore::cache_dir(const std::string& run_id) const {
  return run_dir(run_id) / "cache";
}

bool RunStore::write_once(const fs::path& path, const json& value) const {
  std::error_code ec;
  if (fs::exists(path, ec)) return false;
  write_file_atomic(path, value.dump(2) + "\n");
  return true;
}

std::optional<json> RunStore::read_json(const fs::path& path) const {
  std::error_code ec;
  if (!fs::exists(path, ec)) return std::nullopt;
  auto j = json::parse(read_file(path), nullptr, false);
  if (j.is_discarded()) throw IoError("corrupt JSON in " + path.string());
  return j;
}

namespace {

const char* stage_dir(ReviewStage stage) {
  return stage == ReviewStage::PreRebuttal ? "reviews_pre" : "reviews_post";
}

template <typename T>
std::optional<T> load_as(const RunStore& store, const fs::path& path) {
  auto j = store.read_json(path);
  if (!j) return std::nullopt;
  try {
    return j->get<T>();
  } catch (const json::exception& e) {
    throw SchemaError(path.string() + ": " + e.what());
  } catch (const SchemaError& e) {
    throw SchemaError(path.string() + ": " + e.what());
  }
}

}  // namespace

std::optional<LiteratureSummary> RunStore::load_literature(const std::string& run,
                                                           const std::string& paper) const {
  return load_as<LiteratureSummary>(*this, paper_dir(run, paper) / "literature.json");
}

std::optional<ReviewReport> RunStore::load_review(const std::string& run, const std::string& paper,
                                                  ReviewStage stage,
                                                  const std::string& persona) const {
  check_path_component(persona);
  return load_as<ReviewReport>(*this,
                               paper_dir(run, paper) / stage_dir(stage) / (persona + ".json"));
}

std::optional<Rebuttal> RunStore::load_rebuttal(const std::string& run,
                                                const std::string& paper) const {
  return load_as<Rebuttal>(*this, paper_dir(run, paper) / "rebuttal.json");
}

std::optional<MetaReview> RunStore::load_metareview(const std::string& run,
                                                    const std::string& paper) const {
  return load_as<MetaReview>(*this, paper_dir(run, paper) / "metareview.json");
}

void RunStore::save_literature(const std::string& run, const LiteratureSummary& lit) const {
  write_once(paper_dir(run, lit.paper_id) / "literature.json", lit);
}

void RunStore::save_review(const std::string& run, const ReviewReport& report) const {
  check_path_component(report.persona);
  write_once(paper_dir(run, report.paper_id) / stage_dir(report.stage) / (report.persona + ".json"),
             report);
}

void RunStore::save_rebuttal(const std::string& run, const Rebuttal& rebuttal) const {
  write_once(paper_dir(run, rebuttal.paper_id) / "rebuttal.json", rebuttal);
}

void RunStore::save_metareview(const std::string& run, const std::string& paper,
                               const MetaReview& meta) const {
  write_once(paper_dir(run, paper) / "metareview.json", meta);
}

void RunStore::save_prompt(const std::string& run, const std::string& paper,
                           const std::string& label, int attempt,
                           const llm::ChatRequest& request) const {
  std::string name = label;
  std::replace(name.begin(), name.end(), '/', '_');
  std::replace(name.begin(), name.end(), ':', '_');
  json j = llm::to_openai_json(request);
  j["label"] = label;
  j["attempt"] = attempt;
  j["cache_key"] = llm::request_hash(request);
  write_once(paper_dir(run, paper) / "prompts" / (name + "." + std::to_string(attempt) + ".json"), j);
}

void RunStore::save_index(const PipelineRecord& record) const {
  json kinds = json::object();
  for (const auto& [agent, kind] : record.agent_kinds) {
    kinds[agent] = kind == AgentKind::Human ? "human" : "llm";
  }
  json errors = json::array();
  for (const auto& e : record.errors) errors.push_back({{"agent", e.agent}, {"message", e.message}});
  json pre = json::array();
  for (const auto& r : record.reviews_pre) pre.push_back(r.persona);
  json post = json::array();
  for (const auto& r : record.reviews_post) post.push_back(r.persona);
  const json index = {{"run_id", record.run_id},
                      {"paper_id", record.paper_id},
                      {"config_hash", record.config_hash},
                      {"flags", record.flags},
                      {"agent_kinds", kinds},
                      {"reviews_pre", pre},
                      {"reviews_post", post},
                      {"warnings", record.warnings},
                      {"errors", errors},
                      {"failed", record.failed}};
  write_file_atomic(paper_dir(record.run_id, record.paper_id) / "record.json", index.dump(2) + "\n");
}

std::optional<json> RunStore::load_index(const std::string& run, const std::string& paper) const {
  return read_json(paper_dir(run, paper) / "record.json");
}

PipelineRecord RunStore::load_record(const std::string& run, const std::string& paper) const {
  const auto index = load_index(run, paper);
  if (!index) throw IoError("no record for " + run + "/" + paper);
  PipelineRecord r;
  r.run_id = index->value("run_id", run);
  r.paper_id = index->value("paper_id", paper);
  r.config_hash = index->value("config_hash", "");
  r.flags = index->value("flags", json::object()).get<AblationFlags>();
  const auto kinds = index->value("agent_kinds", json::object());
  for (const auto& [agent, kind] : kinds.items()) {
    r.agent_kinds[agent] = kind == "human" ? AgentKind::Human : AgentKind::Llm;
  }
  r.warnings = index->value("warnings", std::vector<std::string>{});
  for (const auto& e : index->value("errors", json::array())) {
    r.errors.push_back({e.value("agent", ""), e.value("message", "")});
  }
  r.failed = index->value("failed", false);
  r.literature = load_literature(run, paper);
  for (const auto& persona : index->value("reviews_pre", std::vector<std::string>{})) {
    if (auto rep = load_review(run, paper, ReviewStage::PreRebuttal, persona)) {
      r.reviews_pre.push_back(std::move(*rep));
    }
  }
  r.rebuttal = load_rebuttal(run, paper);
  for (const auto& persona : index->value("reviews_post", std::vector<std::string>{})) {
    if (auto rep = load_review(run, paper, ReviewStage::PostRebuttal, persona)) {
      r.reviews_post.push_back(std::move(*rep));
    }
  }
  r.metareview = load_metareview(run, paper);
  return r;
}

std::vector<std::string> RunStore::runs() const {
  std::vector<std::string> out;
  std::error_code ec;
  if (!fs::is_directory(root_, ec)) return out;
  for (const auto& entry : fs::directory_iterator(root_)) {
    if (entry.is_directory()) out.push_back(entry.path().filename().string());
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<std::string> RunStore::papers(const std::string& run) const {
  std::vector<std::string> out;
  std::error_code ec;
  const auto dir = run_dir(run);
  if (!fs::is_directory(dir, ec)) return out;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.is_directory() && fs::exists(entry.path() / "record.json")) {
      out.push_back(entry.path().filename().string());
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<std::pair<std::string, json>> RunStore::prompts(const std::string& run,
                                                            const std::string& paper) const {
  std::vector<std::pair<std::string, json>> out;
  const auto dir = paper_dir(run, paper) / "prompts";
  std::error_code ec;
  if (!fs::is_directory(dir, ec)) return out;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.path().extension() != ".json") continue;
    if (auto j = read_json(entry.path())) out.emplace_back(entry.path().filename().string(), *j);
  }
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  return out;
}

}  // namespace peerpanel
