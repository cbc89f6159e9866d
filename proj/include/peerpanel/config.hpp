#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "peerpanel/gateway.hpp"
#include "peerpanel/lit_agent.hpp"
#include "peerpanel/pipeline.hpp"
#include "peerpanel/search.hpp"

namespace peerpanel {

/// One JSON file drives a run. Every key is optional; see README for the
/// full list. The API keys come from the environment only.
struct RunConfig {
  std::string run_id = "run";
  std::vector<std::string> panel;  // persona names; empty = every shipped reviewer
  AblationFlags flags;
  std::optional<std::string> reviewer_guidelines;
  std::optional<std::string> ac_guidelines;

  std::string base_url = "http://127.0.0.1:8000";
  prompts::AgentSettings llm;
  std::size_t parallelism = 8;
  int timeout_s = 120;
  int retries = 3;

  std::string search_url = "https://api.semanticscholar.org";
  int search_limit = 20;
  int literature_queries = 3;
  int literature_k = 8;

  int grounding_retries = 3;
  int parse_attempts = 2;
  std::string strict_grounding_instruction = prompts::kDefaultStrictGrounding;

  std::vector<std::string> human_agents;  // agent ids handed to people
  int human_timeout_s = 3600;

  std::optional<std::filesystem::path> corpus;
  std::optional<std::filesystem::path> personas;
  std::filesystem::path runs_dir = "runs";

  std::string api_key;         // PEERPANEL_API_KEY
  std::string search_api_key;  // SEMANTIC_SCHOLAR_API_KEY
};

/// Throws ConfigError on unknown keys or wrong types. Relative paths in
/// the file resolve against `base_dir`.
RunConfig parse_config(const json& j, const std::filesystem::path& base_dir = {});
RunConfig load_config(const std::filesystem::path& path);
json to_json(const RunConfig& c);

EngineConfig engine_config(const RunConfig& c);
llm::GatewayConfig gateway_config(const RunConfig& c, const std::filesystem::path& cache_dir);
llm::HttpBackendConfig backend_config(const RunConfig& c);
lit::LitAgentConfig literature_config(const RunConfig& c);
lit::SemanticScholarConfig search_config(const RunConfig& c);
HumanOverrides human_overrides(const RunConfig& c);

}  // namespace peerpanel
