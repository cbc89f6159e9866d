#include "peerpanel/human_tasks.hpp"

#include "peerpanel/errors.hpp"

namespace peerpanel {

std::string_view to_string(TaskStatus s) noexcept {
  switch (s) {
    case TaskStatus::Open: return "open";
    case TaskStatus::Completed: return "completed";
    case TaskStatus::Expired: return "expired";
  }
  return "open";
}

void to_json(json& j, const HumanTask& t) {
  j = json{{"id", t.id},         {"kind", "human"},       {"run_id", t.run_id},
           {"paper_id", t.paper_id}, {"agent", t.agent},  {"stage", t.stage},
           {"context", t.context}, {"status", to_string(t.status)}};
  if (t.submission) j["submission"] = *t.submission;
}

json validate_submission(const HumanTask& task, const json& body) {
  auto check_paper = [&](const std::string& paper_id) {
    if (paper_id != task.paper_id) {
      throw SchemaError("submission is for paper '" + paper_id + "', task is for '" +
                        task.paper_id + "'");
    }
  };
  auto check_review = [&](ReviewStage expected) {
    auto r = body.get<ReviewReport>();
    check_paper(r.paper_id);
    if (r.stage != expected) throw SchemaError("wrong review stage");
    const auto colon = task.agent.find(':');
    const std::string persona = colon == std::string::npos ? task.agent : task.agent.substr(colon + 1);
    if (r.persona != persona) throw SchemaError("submission persona does not match task");
    return json(r);
  };
  try {
    if (task.stage == "reviewer") return check_review(ReviewStage::PreRebuttal);
    if (task.stage == "post_rebuttal") return check_review(ReviewStage::PostRebuttal);
    if (task.stage == "author") {
      auto r = body.get<Rebuttal>();
      check_paper(r.paper_id);
      return r;
    }
    if (task.stage == "metareview") return body.get<MetaReview>();
    if (task.stage == "literature") {
      auto l = body.get<LiteratureSummary>();
      check_paper(l.paper_id);
      return l;
    }
  } catch (const json::exception& e) {
    throw SchemaError(e.what());
  }
  throw SchemaError("unknown task stage '" + task.stage + "'");
}

std::string HumanTaskQueue::post(std::string run_id, std::string paper_id, std::string agent,
                                 std::string stage, json context) {
  std::lock_guard lock(mu_);
  HumanTask t;
  t.id = "task-" + std::to_string(next_id_++);
  t.run_id = std::move(run_id);
  t.paper_id = std::move(paper_id);
  t.agent = std::move(agent);
  t.stage = std::move(stage);
  t.context = std::move(context);
  const auto id = t.id;
  tasks_.emplace(id, std::move(t));
  changed_.notify_all();
  return id;
}

std::optional<json> HumanTaskQueue::wait(const std::string& id,
                                         std::chrono::milliseconds timeout) {
  std::unique_lock lock(mu_);
  auto it = tasks_.find(id);
  if (it == tasks_.end()) return std::nullopt;
  const bool done = changed_.wait_for(lock, timeout, [&] {
    return tasks_.at(id).status == TaskStatus::Completed;
  });
  auto& task = tasks_.at(id);
  if (!done) {
    task.status = TaskStatus::Expired;
    return std::nullopt;
  }
  return task.submission;
}

SubmitResult HumanTaskQueue::submit(const std::string& id, const json& body) {
  std::lock_guard lock(mu_);
  auto it = tasks_.find(id);
  if (it == tasks_.end()) return {SubmitStatus::NotFound, "no task '" + id + "'"};
  auto& task = it->second;
  if (task.status != TaskStatus::Open) {
    return {SubmitStatus::Conflict, "task '" + id + "' is " + std::string(to_string(task.status))};
  }
  try {
    task.submission = validate_submission(task, body);
  } catch (const SchemaError& e) {
    return {SubmitStatus::Invalid, e.what()};
  }
  task.status = TaskStatus::Completed;
  changed_.notify_all();
  return {SubmitStatus::Accepted, "accepted"};
}

std::vector<HumanTask> HumanTaskQueue::list(bool open_only) const {
  std::lock_guard lock(mu_);
  std::vector<HumanTask> out;
  for (const auto& [id, t] : tasks_) {
    if (!open_only || t.status == TaskStatus::Open) out.push_back(t);
  }
  return out;
}

std::optional<HumanTask> HumanTaskQueue::get(const std::string& id) const {
  std::lock_guard lock(mu_);
  auto it = tasks_.find(id);
  if (it == tasks_.end()) return std::nullopt;
  return it->second;
}

}  // namespace peerpanel
