#pragma once

#include <map>
#include <string>
#include <vector>

namespace llmrepl::kernel {

struct TraceEvent {
  int seq = 0;
  int step = 0;  // env steps completed when the event fired
  std::string event;
  std::string repl;
  std::string text;
  std::map<std::string, std::string> extra;
};

// Collects episode events and renders the two trace outputs: the human
// log using the transcript markers
//   ##### ENTER REPL `name` #####
//   ##### EXITING REPL `name`#####
// (the EXITING form has no space before the trailing hashes) and a
// structured JSONL stream. Timestamps are logical sequence numbers so
// scripted runs are byte-identical.
class TraceWriter {
 public:
  void emit(const std::string& event, const std::string& repl,
            const std::string& text,
            std::map<std::string, std::string> extra = {});

  void set_step(int step) { step_ = step; }
  int step() const { return step_; }

  const std::vector<TraceEvent>& events() const { return events_; }
  const std::string& human_log() const { return human_; }
  std::string jsonl() const;

  // Count of events with the given name (test convenience).
  int count(const std::string& event) const;

 private:
  int seq_ = 0;
  int step_ = 0;
  std::string human_;
  std::vector<TraceEvent> events_;
};

}  // namespace llmrepl::kernel
