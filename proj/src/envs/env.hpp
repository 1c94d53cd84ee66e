#pragma once

#include <stdexcept>
#include <string>

namespace llmrepl::envs {

struct EnvResult {
  std::string obs;
  double reward = 0.0;
  bool done = false;
};

struct EnvError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Text environment: reset with a task id, step with action text, read the
// final score. Identical (task, action sequence) always produces identical
// observations; stepping after done throws EnvError.
class Environment {
 public:
  virtual ~Environment() = default;
  virtual std::string reset(int task_id) = 0;
  virtual EnvResult step(const std::string& action) = 0;
  virtual double score() const = 0;
  // Instruction text for the episode's root task line.
  virtual std::string task_instruction() const = 0;
};

}  // namespace llmrepl::envs
