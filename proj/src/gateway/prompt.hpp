#pragma once

#include <string>
#include <vector>

#include "gateway/provider.hpp"
#include "kernel/history.hpp"

namespace llmrepl::gateway {

inline constexpr const char* kPreambleVersion = "preamble/v1";

// What the prompt renderer needs to know about a REPL. The kernel builds
// this view from its LlmRepl records.
struct ReplView {
  std::string name;
  std::string demo_task;  // empty when the pool has no demo for this REPL
  const std::vector<kernel::HistoryEntry>* demo_entries = nullptr;
  const std::vector<kernel::HistoryEntry>* live_entries = nullptr;
  std::string partial_block;   // continuation mode: block text so far
  std::string subtask_fname;   // subtask-description mode
};

// Pure function of (history, mode): next-block prompts end at the point
// needing input; subtask-description prompts ask for one line beginning
// "Your task is to:".
Prompt render_prompt(const ReplView& view, PromptMode mode);

const std::string& next_block_preamble();
const std::string& subtask_preamble();

}  // namespace llmrepl::gateway
