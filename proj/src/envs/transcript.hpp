#pragma once

#include <string>
#include <vector>

#include "envs/env.hpp"

namespace llmrepl::envs {

// Replays a recorded (observation, action) script: the agent's actions
// must match the recording step for step. The first divergent action ends
// the episode with reward 0 and a report naming expected vs. actual;
// consuming the whole script ends it with reward 1.
class TranscriptEnv : public Environment {
 public:
  struct Step {
    std::string obs;     // shown before the action below is expected
    std::string action;  // next expected action
  };

  TranscriptEnv(std::string task, std::vector<Step> steps)
      : task_(std::move(task)), steps_(std::move(steps)) {}

  static TranscriptEnv load(const std::string& path);

  std::string reset(int task_id) override;
  EnvResult step(const std::string& action) override;
  double score() const override;
  std::string task_instruction() const override { return task_; }

 private:
  std::string task_;
  std::vector<Step> steps_;
  std::size_t next_ = 0;
  bool done_ = false;
  bool diverged_ = false;
};

}  // namespace llmrepl::envs
