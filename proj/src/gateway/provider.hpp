#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace llmrepl::gateway {

enum class PromptMode { NextBlock, Continuation, SubtaskDescription };

struct CompletionParams {
  std::string model = "scripted";
  double temperature = 0.0;
  int max_tokens = 512;
  std::vector<std::string> stop = {"\n>>>"};
};

struct Prompt {
  std::string repl_name;  // target REPL (the fname for subtask queries)
  PromptMode mode = PromptMode::NextBlock;
  std::string preamble;   // system text
  std::string transcript; // user text
};

struct ProviderError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

class LlmProvider {
 public:
  virtual ~LlmProvider() = default;
  // Returns the raw completion text; throws ProviderError when the source
  // cannot produce one (transport failure after retries, exhausted
  // playbook, failed prompt assertion).
  virtual std::string complete(const Prompt& prompt,
                               const CompletionParams& params) = 0;
};

}  // namespace llmrepl::gateway
