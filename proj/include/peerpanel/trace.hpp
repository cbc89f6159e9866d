#pragma once

#include <mutex>
#include <string>
#include <utility>
#include <vector>

#include "peerpanel/gateway.hpp"

namespace peerpanel {

/// Thread-safe collector for the prompts an agent sent and the warnings it
/// raised. One per paper in the pipeline.
class Trace {
 public:
  struct PromptEntry {
    std::string label;
    llm::ChatRequest request;
  };

  void warn(std::string message) {
    std::lock_guard lock(mu_);
    warnings_.push_back(std::move(message));
  }

  void prompt(std::string label, const llm::ChatRequest& request) {
    std::lock_guard lock(mu_);
    prompts_.push_back({std::move(label), request});
  }

  std::vector<std::string> warnings() const {
    std::lock_guard lock(mu_);
    return warnings_;
  }

  std::vector<PromptEntry> prompts() const {
    std::lock_guard lock(mu_);
    return prompts_;
  }

 private:
  mutable std::mutex mu_;
  std::vector<std::string> warnings_;
  std::vector<PromptEntry> prompts_;
};

}  // namespace peerpanel
