#include "kernel/history.hpp"

#include "mlang/block.hpp"

namespace llmrepl::kernel {

std::string render_entry(const HistoryEntry& entry) {
  switch (entry.kind) {
    case HistoryEntry::Kind::Code:
      return mlang::render_echo(entry.text) + "\n";
    case HistoryEntry::Kind::Stdout:
      return entry.text + "\n\n";
    case HistoryEntry::Kind::EchoValue:
    case HistoryEntry::Kind::Obs:
    case HistoryEntry::Kind::Error:
      return entry.text + "\n";
    case HistoryEntry::Kind::TaskBoundary:
      return "Your task is to: " + entry.text + "\n";
  }
  return "";
}

std::string render_history(const std::vector<HistoryEntry>& entries) {
  std::string out;
  for (const HistoryEntry& entry : entries) out += render_entry(entry);
  return out;
}

}  // namespace llmrepl::kernel
