#include "kernel/trace.hpp"

#include <json.hpp>

#include "mlang/block.hpp"

namespace llmrepl::kernel {

void TraceWriter::emit(const std::string& event, const std::string& repl,
                       const std::string& text,
                       std::map<std::string, std::string> extra) {
  TraceEvent e;
  e.seq = ++seq_;
  e.step = step_;
  e.event = event;
  e.repl = repl;
  e.text = text;
  e.extra = std::move(extra);
  events_.push_back(e);

  if (event == "obs") {
    human_ += text + "\n";
  } else if (event == "enter") {
    human_ += "##### ENTER REPL `" + repl + "` #####\n";
  } else if (event == "exit") {
    human_ += "##### EXITING REPL `" + repl + "`#####\n";
  } else if (event == "code") {
    human_ += mlang::render_echo(text) + "\n";
  } else if (event == "stdout") {
    human_ += text + "\n\n";
  } else if (event == "echo") {
    human_ += text + "\n";
  } else if (event == "error" || event == "spawn_note") {
    human_ += text + "\n";
  } else if (event == "act") {
    human_ += "> " + text + "\n\n";
  }
  // llm_call, spawn, answer, subtask, episode_start/end stay JSONL-only
}

std::string TraceWriter::jsonl() const {
  std::string out;
  for (const TraceEvent& e : events_) {
    nlohmann::json row = {
        {"seq", e.seq}, {"step", e.step}, {"event", e.event}};
    if (!e.repl.empty()) row["repl"] = e.repl;
    if (!e.text.empty()) row["text"] = e.text;
    for (const auto& [k, v] : e.extra) row[k] = v;
    out += row.dump() + "\n";
  }
  return out;
}

int TraceWriter::count(const std::string& event) const {
  int n = 0;
  for (const TraceEvent& e : events_)
    if (e.event == event) ++n;
  return n;
}

}  // namespace llmrepl::kernel
