#pragma once

#include <string>
#include <vector>

#include "interp/value.hpp"

namespace llmrepl::interp {

// Suspension reason crossing the interpreter/kernel boundary. Every effect
// is produced by exactly one context-sensitive call; call_name/call_index
// identify the ledger slot the kernel must fill before re-execution.
struct Effect {
  enum class Kind { Act, Answer, SpawnCall, GetArgs, GetObs };

  Kind kind;
  std::string call_name;  // "act", "answer", "get_args", "get_obs", or fname
  int call_index = 0;     // 1-based per-name index within the block

  std::string action;        // Act: rendered action text
  Value value;               // Answer payload
  std::vector<Value> args;   // SpawnCall arguments
  bool callee_bound = false; // SpawnCall: name was already bound to a REPL fn
};

}  // namespace llmrepl::interp
