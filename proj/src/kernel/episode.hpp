#pragma once

#include <optional>
#include <string>
#include <vector>

#include "envs/env.hpp"
#include "gateway/prompt.hpp"
#include "gateway/provider.hpp"
#include "interp/effect.hpp"
#include "kernel/pool.hpp"
#include "kernel/trace.hpp"

namespace llmrepl::kernel {

struct Budgets {
  int max_env_steps = 50;
  int max_llm_calls = 100;
  int max_spawn_depth = 16;
};

struct EpisodeOptions {
  Budgets budgets;
  bool no_subtask_repls = false;  // convert spawns into REPLNameError entries
  gateway::CompletionParams params;
};

struct EpisodeResult {
  bool success = false;
  double score = 0.0;
  int env_steps = 0;
  int llm_calls = 0;
  // env_done | root_answer | root_failed | llm_call_budget |
  // env_step_budget | aborted: <diagnostic>
  std::string reason;
  std::string root_answer;  // rendered value when the root answered
};

// Drives one episode: acquire-or-resume a block on the top-of-stack REPL,
// evaluate it, dispatch the resulting effect (environment action, child
// spawn, answer delivery, argument/observation reads), repeat until the
// environment finishes, the root answers, or a budget runs out.
class EpisodeRunner {
 public:
  EpisodeRunner(ReplPool& pool, envs::Environment& env,
                gateway::LlmProvider& llm, EpisodeOptions options,
                TraceWriter& trace);

  EpisodeResult run(int task_id, const std::string& root_task);

 private:
  enum class Acquire { Ok, ReplFailed, EpisodeOver };

  struct Frame {
    LlmRepl* repl;
    std::string callsite_name;  // ledger slot in the parent, empty for root
    int callsite_index = 0;
  };

  Acquire acquire_block(LlmRepl& repl);
  bool query_subtask_description(LlmRepl& parent, const std::string& fname,
                                 std::string& task_out);
  std::string run_completion(LlmRepl& repl, gateway::PromptMode mode,
                             const std::string& partial,
                             const std::string& fname, bool& ok);
  void dispatch_act(const interp::Effect& effect);
  void dispatch_spawn(const interp::Effect& effect);
  void pop_with_answer(const interp::Value& value);
  void broadcast_observation(const std::string& obs);
  void finish(const std::string& reason);
  void abort_episode(const std::string& diagnostic);
  gateway::ReplView view_of(LlmRepl& repl) const;
  LlmRepl& top() { return *stack_.back().repl; }

  ReplPool& pool_;
  envs::Environment& env_;
  gateway::LlmProvider& llm_;
  EpisodeOptions options_;
  TraceWriter& trace_;

  std::vector<Frame> stack_;
  std::string latest_obs_;
  int env_steps_ = 0;
  int llm_calls_ = 0;
  bool finished_ = false;
  EpisodeResult result_;
};

}  // namespace llmrepl::kernel
