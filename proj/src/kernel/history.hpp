#pragma once

#include <string>
#include <vector>

namespace llmrepl::kernel {

// Append-only transcript entry of one LLM-REPL. Code entries keep the raw
// block text; prompt and log rendering decorate them with ">>> " / "... ".
struct HistoryEntry {
  enum class Kind {
    Code,          // raw block text (possibly multi-line)
    Stdout,        // print output; renders with a trailing blank line
    EchoValue,     // repl echo of a top-level expression value
    Obs,           // environment observation broadcast
    Error,         // diagnostics and spawn notes
    TaskBoundary,  // start of a live segment; text is the task description
  };
  Kind kind;
  std::string text;
};

// Renders entries the way transcripts show them. Code lines are echoed,
// stdout gets a separating blank line, the task boundary renders as the
// "Your task is to: ..." line.
std::string render_history(const std::vector<HistoryEntry>& entries);

std::string render_entry(const HistoryEntry& entry);

}  // namespace llmrepl::kernel
