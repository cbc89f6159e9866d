#pragma once

#include <chrono>
#include <condition_variable>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "peerpanel/types.hpp"

namespace peerpanel {

enum class TaskStatus { Open, Completed, Expired };

std::string_view to_string(TaskStatus s) noexcept;

/// A pipeline stage parked for a person to complete.
struct HumanTask {
  std::string id;
  std::string run_id;
  std::string paper_id;
  std::string agent;  // "reviewer:theorist", "author", "metareviewer", ...
  std::string stage;  // literature | reviewer | author | post_rebuttal | metareview
  json context;
  TaskStatus status = TaskStatus::Open;
  std::optional<json> submission;
};

void to_json(json& j, const HumanTask& t);

enum class SubmitStatus { Accepted, NotFound, Conflict, Invalid };

struct SubmitResult {
  SubmitStatus status;
  std::string message;
};

/// Checks a submission against the record schema for `task.stage` and that
/// it belongs to the task's paper (and persona, for reviewer stages).
/// Returns the canonical serialization; throws SchemaError.
json validate_submission(const HumanTask& task, const json& body);

/// Queue shared between the pipeline (which parks and waits) and the service
/// API (which lists and submits). First valid submission wins.
class HumanTaskQueue {
 public:
  std::string post(std::string run_id, std::string paper_id, std::string agent,
                   std::string stage, json context);

  /// Blocks until the task is completed or `timeout` elapses. On timeout the
  /// task is marked expired and nullopt is returned.
  std::optional<json> wait(const std::string& id, std::chrono::milliseconds timeout);

  SubmitResult submit(const std::string& id, const json& body);

  std::vector<HumanTask> list(bool open_only = true) const;
  std::optional<HumanTask> get(const std::string& id) const;

 private:
  mutable std::mutex mu_;
  std::condition_variable changed_;
  std::map<std::string, HumanTask> tasks_;
  unsigned long long next_id_ = 1;
};

}  // namespace peerpanel
