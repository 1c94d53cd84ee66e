#pragma once

#include <deque>
#include <map>
#include <mutex>
#include <optional>
#include <string>

#include "gateway/provider.hpp"

namespace llmrepl::gateway {

// Deterministic completion source replaying authored outputs. Queues are
// keyed by REPL name (subtask-description queries consume from the queue
// of the function being described). Exhaustion is an error, never silent
// recycling.
class ScriptedProvider : public LlmProvider {
 public:
  struct Entry {
    std::optional<std::string> expect_prefix;  // asserted against transcript
    std::string completion;
  };

  ScriptedProvider() = default;
  ScriptedProvider(ScriptedProvider&& other) noexcept
      : queues_(std::move(other.queues_)), turns_(std::move(other.turns_)) {}
  ScriptedProvider& operator=(ScriptedProvider&& other) noexcept {
    queues_ = std::move(other.queues_);
    turns_ = std::move(other.turns_);
    return *this;
  }

  static ScriptedProvider load(const std::string& path);
  static ScriptedProvider from_json_text(const std::string& text,
                                         const std::string& origin);

  void push(const std::string& repl_name, std::string completion,
            std::optional<std::string> expect_prefix = std::nullopt);

  std::string complete(const Prompt& prompt,
                       const CompletionParams& params) override;

  bool exhausted() const;

 private:
  mutable std::mutex mu_;
  std::map<std::string, std::deque<Entry>> queues_;
  std::map<std::string, int> turns_;
};

}  // namespace llmrepl::gateway
