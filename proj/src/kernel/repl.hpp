#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "interp/ledger.hpp"
#include "interp/scope.hpp"
#include "interp/value.hpp"
#include "kernel/history.hpp"
#include "mlang/ast.hpp"
#include "mlang/block.hpp"

namespace llmrepl::kernel {

// The block a REPL is currently executing (or holding suspended). The
// snapshot is the rollback target for replays; the ledger records every
// resolved context-sensitive call of this block.
struct BlockState {
  mlang::SourceBlock block;
  mlang::StmtPtr ast;
  interp::Scope snapshot;
  interp::CallLedger ledger;
};

struct LlmRepl {
  std::string name;
  std::string task;       // live task description, bare text
  std::string demo_task;  // task line of the frozen demo segment, if any
  std::vector<HistoryEntry> demo_history;  // immutable demonstration text
  std::vector<HistoryEntry> history;       // live segment, append-only
  interp::Scope scope;
  std::optional<BlockState> suspended;
  std::vector<interp::Value> invocation_args;
  int consecutive_syntax_failures = 0;
  bool failed = false;
  bool from_demo = false;

  void append(HistoryEntry::Kind kind, std::string text) {
    history.push_back(HistoryEntry{kind, std::move(text)});
  }

  // Clears per-episode state; demo text persists, variables do not.
  void reset_for_episode(const std::string& live_task) {
    task = live_task;
    history.clear();
    scope.clear();
    suspended.reset();
    invocation_args.clear();
    consecutive_syntax_failures = 0;
    failed = false;
    append(HistoryEntry::Kind::TaskBoundary, live_task);
  }
};

}  // namespace llmrepl::kernel
