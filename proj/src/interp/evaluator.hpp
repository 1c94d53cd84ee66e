#pragma once

#include <optional>
#include <string>
#include <vector>

#include "interp/effect.hpp"
#include "interp/ledger.hpp"
#include "interp/scope.hpp"
#include "mlang/ast.hpp"

namespace llmrepl::interp {

// One evaluation pass over a block. Evaluation always replays from the
// block start: context-sensitive calls whose (name, index) slot is already
// in the ledger return the recorded value silently; the first unresolved
// one suspends with a fresh Effect. Completed appears only when the block
// runs to the end with every context call resolved.
struct ExecOutcome {
  enum class Status { Completed, Suspended, Failed };

  Status status = Status::Completed;
  // stdout text produced by prints that ran fresh in this pass, in order.
  std::vector<std::string> fresh_stdout;
  // Completed: value of a top-level expression statement (unset for None).
  std::optional<Value> echo;
  // Completed: the scope after the block ran, to replace the REPL's scope.
  std::optional<Scope> scope;
  // Suspended: the unresolved effect the kernel must handle.
  std::optional<Effect> effect;
  // Failed: rendered diagnostic, e.g. REPLNameError("name 'x' not defined.")
  std::string diagnostic;
};

inline constexpr long long kStepBudget = 100000;

// Pure builtins plus the context-sensitive primitives. print is counted
// and cached so replays never duplicate history output; print_page prints
// the latest observation (get_obs + print under the hood).
bool is_builtin_name(const std::string& name);

ExecOutcome evaluate_block(const mlang::Stmt& ast, const Scope& snapshot,
                           CallLedger& ledger);

}  // namespace llmrepl::interp
