#include "peerpanel/config.hpp"

#include <cstdlib>
#include <set>

#include "peerpanel/errors.hpp"
#include "peerpanel/fsutil.hpp"

namespace peerpanel {

namespace {

void check_keys(const json& j, const std::string& where, const std::set<std::string>& allowed) {
  if (!j.is_object()) throw ConfigError(where + " must be an object");
  for (const auto& [key, unused] : j.items()) {
    if (!allowed.count(key)) throw ConfigError("unknown config key " + where + "." + key);
  }
}

template <typename T>
void read(const json& j, const char* key, T& out, const std::string& where) {
  if (!j.contains(key)) return;
  try {
    out = j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(where + "." + key + ": " + e.what());
  }
}

std::filesystem::path resolve(const std::filesystem::path& base, const std::string& p) {
  std::filesystem::path path(p);
  return path.is_absolute() || base.empty() ? path : base / path;
}

// Guidelines are inline text or {"file": path}.
std::optional<std::string> read_guideline(const json& j, const char* key,
                                          const std::filesystem::path& base) {
  if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
  const auto& v = j.at(key);
  if (v.is_string()) return v.get<std::string>();
  if (v.is_object() && v.contains("file") && v.at("file").is_string()) {
    return read_file(resolve(base, v.at("file").get<std::string>()));
  }
  throw ConfigError(std::string("guidelines.") + key + " must be text or {\"file\": path}");
}

std::string env_or_empty(const char* name) {
  const char* v = std::getenv(name);
  return v ? v : "";
}

}  // namespace

RunConfig parse_config(const json& j, const std::filesystem::path& base_dir) {
  RunConfig c;
  check_keys(j, "config",
             {"run_id", "panel", "flags", "guidelines", "backend", "search", "literature", "caps",
              "human_agents", "human_timeout_s", "corpus", "personas", "runs_dir",
              "strict_grounding_instruction"});
  read(j, "run_id", c.run_id, "config");
  read(j, "panel", c.panel, "config");
  if (j.contains("flags")) {
    const auto& f = j.at("flags");
    if (f.is_string()) {
      // "CI+LitLLM+RB" style.
      const auto s = f.get<std::string>();
      c.flags.conference_instructions = s.find("CI") != std::string::npos;
      c.flags.literature = s.find("LitLLM") != std::string::npos;
      c.flags.rebuttal = s.find("RB") != std::string::npos;
    } else {
      check_keys(f, "flags", {"conference_instructions", "literature", "rebuttal"});
      c.flags = f.get<AblationFlags>();
    }
  }
  if (j.contains("guidelines")) {
    const auto& g = j.at("guidelines");
    check_keys(g, "guidelines", {"reviewer", "area_chair"});
    c.reviewer_guidelines = read_guideline(g, "reviewer", base_dir);
    c.ac_guidelines = read_guideline(g, "area_chair", base_dir);
  }
  if (j.contains("backend")) {
    const auto& b = j.at("backend");
    check_keys(b, "backend",
               {"base_url", "model", "parallelism", "timeout_s", "retries", "temperature",
                "max_tokens"});
    read(b, "base_url", c.base_url, "backend");
    read(b, "model", c.llm.model, "backend");
    read(b, "parallelism", c.parallelism, "backend");
    read(b, "timeout_s", c.timeout_s, "backend");
    read(b, "retries", c.retries, "backend");
    read(b, "temperature", c.llm.temperature, "backend");
    read(b, "max_tokens", c.llm.max_tokens, "backend");
  }
  if (j.contains("search")) {
    const auto& s = j.at("search");
    check_keys(s, "search", {"base_url", "limit"});
    read(s, "base_url", c.search_url, "search");
    read(s, "limit", c.search_limit, "search");
  }
  if (j.contains("literature")) {
    const auto& l = j.at("literature");
    check_keys(l, "literature", {"queries", "k"});
    read(l, "queries", c.literature_queries, "literature");
    read(l, "k", c.literature_k, "literature");
  }
  if (j.contains("caps")) {
    const auto& k = j.at("caps");
    check_keys(k, "caps", {"grounding_retries", "parse_attempts"});
    read(k, "grounding_retries", c.grounding_retries, "caps");
    read(k, "parse_attempts", c.parse_attempts, "caps");
  }
  read(j, "human_agents", c.human_agents, "config");
  read(j, "human_timeout_s", c.human_timeout_s, "config");
  read(j, "strict_grounding_instruction", c.strict_grounding_instruction, "config");
  std::string path;
  if (j.contains("corpus")) {
    read(j, "corpus", path, "config");
    c.corpus = resolve(base_dir, path);
  }
  if (j.contains("personas")) {
    read(j, "personas", path, "config");
    c.personas = resolve(base_dir, path);
  }
  if (j.contains("runs_dir")) {
    read(j, "runs_dir", path, "config");
    c.runs_dir = resolve(base_dir, path);
  }

  if (c.parallelism == 0) throw ConfigError("backend.parallelism must be positive");
  if (c.retries < 0 || c.grounding_retries < 0) throw ConfigError("retry counts must be >= 0");
  if (c.parse_attempts < 1) throw ConfigError("caps.parse_attempts must be >= 1");
  if (c.llm.temperature < 0) throw ConfigError("backend.temperature must be >= 0");
  if (c.flags.conference_instructions && !c.reviewer_guidelines) {
    throw ConfigError("flag CI needs guidelines.reviewer");
  }
  c.api_key = env_or_empty("PEERPANEL_API_KEY");
  c.search_api_key = env_or_empty("SEMANTIC_SCHOLAR_API_KEY");
  return c;
}

RunConfig load_config(const std::filesystem::path& path) {
  json j;
  try {
    j = json::parse(read_file(path));
  } catch (const json::exception& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
  return parse_config(j, path.parent_path());
}

json to_json(const RunConfig& c) {
  json guidelines = json::object();
  if (c.reviewer_guidelines) guidelines["reviewer"] = *c.reviewer_guidelines;
  if (c.ac_guidelines) guidelines["area_chair"] = *c.ac_guidelines;
  json j = {{"run_id", c.run_id},
            {"panel", c.panel},
            {"flags", c.flags},
            {"guidelines", guidelines},
            {"backend",
             {{"base_url", c.base_url},
              {"model", c.llm.model},
              {"parallelism", c.parallelism},
              {"timeout_s", c.timeout_s},
              {"retries", c.retries},
              {"temperature", c.llm.temperature},
              {"max_tokens", c.llm.max_tokens}}},
            {"search", {{"base_url", c.search_url}, {"limit", c.search_limit}}},
            {"literature", {{"queries", c.literature_queries}, {"k", c.literature_k}}},
            {"caps",
             {{"grounding_retries", c.grounding_retries}, {"parse_attempts", c.parse_attempts}}},
            {"human_agents", c.human_agents},
            {"human_timeout_s", c.human_timeout_s},
            {"runs_dir", c.runs_dir.string()},
            {"strict_grounding_instruction", c.strict_grounding_instruction}};
  if (c.corpus) j["corpus"] = c.corpus->string();
  if (c.personas) j["personas"] = c.personas->string();
  return j;
}

EngineConfig engine_config(const RunConfig& c) {
  EngineConfig e;
  e.llm = c.llm;
  e.grounding_retries = c.grounding_retries;
  e.parse_attempts = c.parse_attempts;
  e.strict_grounding_instruction = c.strict_grounding_instruction;
  e.reviewer_guidelines = c.reviewer_guidelines;
  e.ac_guidelines = c.ac_guidelines;
  e.human_timeout = std::chrono::seconds(c.human_timeout_s);
  return e;
}

llm::GatewayConfig gateway_config(const RunConfig& c, const std::filesystem::path& cache_dir) {
  llm::GatewayConfig g;
  g.parallelism = c.parallelism;
  g.retry.retries = c.retries;
  g.cache_dir = cache_dir;
  return g;
}

llm::HttpBackendConfig backend_config(const RunConfig& c) {
  return {c.base_url, c.api_key, std::chrono::seconds(c.timeout_s)};
}

lit::LitAgentConfig literature_config(const RunConfig& c) {
  lit::LitAgentConfig l;
  l.llm = c.llm;
  l.num_queries = c.literature_queries;
  l.limit = c.search_limit;
  l.k = c.literature_k;
  return l;
}

lit::SemanticScholarConfig search_config(const RunConfig& c) {
  lit::SemanticScholarConfig s;
  s.base_url = c.search_url;
  s.api_key = c.search_api_key;
  return s;
}

HumanOverrides human_overrides(const RunConfig& c) {
  HumanOverrides out;
  for (const auto& agent : c.human_agents) out[agent] = AgentKind::Human;
  return out;
}

}  // namespace peerpanel
