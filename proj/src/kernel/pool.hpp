#pragma once

#include <map>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "kernel/repl.hpp"

namespace llmrepl::kernel {

struct DemoLoadError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// One (repl, entry index, replacement text) patch applied at load time,
// used by the buggy-demonstration ablation.
struct BugPatch {
  std::string repl;
  int entry = 0;
  std::string text;
};

std::vector<BugPatch> load_bug_patches(const std::string& path);

// The global REPL registry: demo-frozen entries loaded from a file plus
// REPLs spawned during the current episode. Live spawns are dropped and
// demo entries reset at every episode boundary, so no state crosses tasks
// except the demonstration text itself.
class ReplPool {
 public:
  ReplPool() = default;

  static ReplPool load_demos(const std::string& path);
  static ReplPool from_json_text(const std::string& text,
                                 const std::string& origin);

  void apply_bug_patches(const std::vector<BugPatch>& patches);
  // Removes named demo entries (zero-shot subtask ablation). Unknown
  // names throw, matching the config contract.
  void drop(const std::vector<std::string>& names);

  LlmRepl* find(const std::string& name);
  const LlmRepl* find(const std::string& name) const;
  LlmRepl& create(const std::string& name, const std::string& task);
  LlmRepl& root() { return *find_or_create_root(); }

  void reset_for_episode(const std::string& root_task);

  std::vector<std::string> names() const;
  std::size_t size() const { return entries_.size(); }

  // Adds a demo entry programmatically (tests and fixture tooling).
  LlmRepl& add_demo(const std::string& name, const std::string& task);

 private:
  LlmRepl* find_or_create_root();
  std::map<std::string, std::unique_ptr<LlmRepl>> entries_;
};

inline constexpr const char* kRootReplName = "_main";

}  // namespace llmrepl::kernel
