#pragma once

#include <memory>
#include <string>

#include "peerpanel/arena.hpp"
#include "peerpanel/human_tasks.hpp"
#include "peerpanel/store.hpp"

namespace peerpanel {

/// JSON Schemas (draft 2020-12) for every record a person may submit,
/// keyed by stage, plus the QC annotation body.
json record_schemas();

/// HTTP API over the run store, the arena store and the human task queue:
///   GET  /tasks?kind=human[&status=all]
///   POST /tasks/{id}/submit
///   GET  /runs, /runs/{run}, /runs/{run}/papers/{paper}
///   GET  /arena, /arena/{id}, /arena/{id}/qc
///   POST /arena/{id}/qc/{match}
///   GET  /schemas
/// When `token` is non-empty every request needs "Authorization: Bearer <token>".
class Service {
 public:
  Service(RunStore& runs, arena::ArenaStore& arenas, HumanTaskQueue& tasks,
          std::string token = "");
  ~Service();
  Service(const Service&) = delete;
  Service& operator=(const Service&) = delete;

  /// Binds (port 0 picks a free one) and serves on a background thread.
  /// Returns the bound port. Throws IoError.
  int start(const std::string& host, int port);
  /// Blocks serving on the calling thread.
  void listen(const std::string& host, int port);
  void stop();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace peerpanel
