#pragma once

#include <vector>

#include "envs/env.hpp"

namespace llmrepl::envs {

// Toy counting game: the agent must say 1, 2, 3, 4 via act(n). Done once
// four integers arrive (or a non-integer aborts); reward 1 only for the
// exact sequence.
class CounterEnv : public Environment {
 public:
  std::string reset(int task_id) override;
  EnvResult step(const std::string& action) override;
  double score() const override { return score_; }
  std::string task_instruction() const override { return "Count to 4."; }

  const std::vector<long long>& heard() const { return heard_; }

 private:
  std::vector<long long> heard_;
  bool done_ = false;
  double score_ = 0.0;
};

}  // namespace llmrepl::envs
