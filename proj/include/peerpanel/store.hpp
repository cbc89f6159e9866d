#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "peerpanel/gateway.hpp"
#include "peerpanel/pipeline.hpp"
#include "peerpanel/types.hpp"

namespace peerpanel {

/// On-disk layout:
///   <root>/<run_id>/cache/<request-hash>.json
///   <root>/<run_id>/<paper_id>/record.json
///   <root>/<run_id>/<paper_id>/literature.json
///   <root>/<run_id>/<paper_id>/reviews_pre/<persona>.json
///   <root>/<run_id>/<paper_id>/rebuttal.json
///   <root>/<run_id>/<paper_id>/reviews_post/<persona>.json
///   <root>/<run_id>/<paper_id>/metareview.json
///   <root>/<run_id>/<paper_id>/prompts/<label>.<n>.json
/// Stage files are write-once; all writes are atomic.
class RunStore {
 public:
  explicit RunStore(std::filesystem::path root);

  const std::filesystem::path& root() const { return root_; }
  std::filesystem::path run_dir(const std::string& run_id) const;
  std::filesystem::path paper_dir(const std::string& run_id, const std::string& paper_id) const;
  std::filesystem::path cache_dir(const std::string& run_id) const;

  /// Writes `value` unless the file already exists. Returns true if written.
  bool write_once(const std::filesystem::path& path, const json& value) const;
  std::optional<json> read_json(const std::filesystem::path& path) const;

  std::optional<LiteratureSummary> load_literature(const std::string& run, const std::string& paper) const;
  std::optional<ReviewReport> load_review(const std::string& run, const std::string& paper,
                                          ReviewStage stage, const std::string& persona) const;
  std::optional<Rebuttal> load_rebuttal(const std::string& run, const std::string& paper) const;
  std::optional<MetaReview> load_metareview(const std::string& run, const std::string& paper) const;

  void save_literature(const std::string& run, const LiteratureSummary& lit) const;
  void save_review(const std::string& run, const ReviewReport& report) const;
  void save_rebuttal(const std::string& run, const Rebuttal& rebuttal) const;
  void save_metareview(const std::string& run, const std::string& paper, const MetaReview& meta) const;
  void save_prompt(const std::string& run, const std::string& paper, const std::string& label,
                   int attempt, const llm::ChatRequest& request) const;

  /// record.json holds the run-level metadata (config hash, flags, agent
  /// kinds, warnings, errors); it is the one file rewritten on re-runs.
  void save_index(const PipelineRecord& record) const;
  std::optional<json> load_index(const std::string& run, const std::string& paper) const;

  /// Reassembles the full record from the stage files. Throws IoError when
  /// the paper has no record.json.
  PipelineRecord load_record(const std::string& run, const std::string& paper) const;

  std::vector<std::string> runs() const;
  std::vector<std::string> papers(const std::string& run) const;

  /// Every persisted prompt file for a paper (parsed JSON), sorted by path.
  std::vector<std::pair<std::string, json>> prompts(const std::string& run,
                                                    const std::string& paper) const;

 private:
  std::filesystem::path root_;
};

/// Path-safety check for ids used as directory names. Throws PreconditionError.
void check_path_component(const std::string& id);

}  // namespace peerpanel
