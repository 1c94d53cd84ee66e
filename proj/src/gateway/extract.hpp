#pragma once

#include <string>

namespace llmrepl::gateway {

// First block extracted from a raw completion. `complete` is false when
// the model stopped mid-block (a bare compound header or an open bracket)
// and a continuation query is needed; `empty` when no statement content
// was found at all.
struct ExtractResult {
  std::string text;
  bool complete = false;
  bool empty = true;
};

// Strips any ">>> " / "... " decorations the model echoed, takes exactly
// the first complete statement, and discards trailing text after it.
ExtractResult extract_block(const std::string& completion);

// Continues an incomplete block with a follow-up completion.
ExtractResult extend_block(const std::string& partial,
                           const std::string& continuation);

}  // namespace llmrepl::gateway
