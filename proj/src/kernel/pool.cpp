#include "kernel/pool.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

namespace llmrepl::kernel {

namespace {

HistoryEntry::Kind entry_kind(const std::string& kind, const std::string& where) {
  if (kind == "code") return HistoryEntry::Kind::Code;
  if (kind == "output") return HistoryEntry::Kind::Stdout;
  if (kind == "obs") return HistoryEntry::Kind::Obs;
  if (kind == "error") return HistoryEntry::Kind::Error;
  throw DemoLoadError("unknown entry kind '" + kind + "' at " + where);
}

}  // namespace

ReplPool ReplPool::load_demos(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DemoLoadError("cannot open demo file: " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return from_json_text(buffer.str(), path);
}

ReplPool ReplPool::from_json_text(const std::string& text,
                                  const std::string& origin) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw DemoLoadError("malformed demo file " + origin + ": " + e.what());
  }
  ReplPool pool;
  if (doc.is_null() || (doc.is_object() && doc.empty())) return pool;
  if (!doc.is_object() || !doc.contains("repls")) {
    if (doc.is_array() && doc.empty()) return pool;  // empty file, zero-shot
    throw DemoLoadError("demo file " + origin + " lacks a repls list");
  }
  int index = 0;
  for (const auto& repl_json : doc["repls"]) {
    std::string where = origin + " repls[" + std::to_string(index) + "]";
    if (!repl_json.contains("name"))
      throw DemoLoadError("missing name at " + where);
    std::string name = repl_json["name"].get<std::string>();
    if (pool.entries_.count(name))
      throw DemoLoadError("duplicate repl '" + name + "' at " + where);
    auto repl = std::make_unique<LlmRepl>();
    repl->name = name;
    repl->demo_task = repl_json.value("task", "");
    repl->task = repl->demo_task;
    repl->from_demo = true;
    int entry_index = 0;
    for (const auto& entry_json : repl_json.value("entries", nlohmann::json::array())) {
      std::string entry_where =
          where + ".entries[" + std::to_string(entry_index) + "]";
      if (!entry_json.contains("kind") || !entry_json.contains("text"))
        throw DemoLoadError("entry lacks kind/text at " + entry_where);
      repl->demo_history.push_back(
          HistoryEntry{entry_kind(entry_json["kind"].get<std::string>(), entry_where),
                       entry_json["text"].get<std::string>()});
      ++entry_index;
    }
    pool.entries_.emplace(name, std::move(repl));
    ++index;
  }
  return pool;
}

std::vector<BugPatch> load_bug_patches(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DemoLoadError("cannot open bug-injection file: " + path);
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw DemoLoadError("malformed bug-injection file " + path + ": " + e.what());
  }
  std::vector<BugPatch> patches;
  for (const auto& row : doc) {
    BugPatch patch;
    patch.repl = row.at("repl").get<std::string>();
    patch.entry = row.at("entry").get<int>();
    patch.text = row.at("text").get<std::string>();
    patches.push_back(std::move(patch));
  }
  return patches;
}

void ReplPool::apply_bug_patches(const std::vector<BugPatch>& patches) {
  for (const BugPatch& patch : patches) {
    LlmRepl* repl = find(patch.repl);
    if (!repl)
      throw DemoLoadError("bug patch names unknown repl '" + patch.repl + "'");
    if (patch.entry < 0 ||
        patch.entry >= static_cast<int>(repl->demo_history.size()))
      throw DemoLoadError("bug patch entry index " +
                          std::to_string(patch.entry) + " out of range for '" +
                          patch.repl + "'");
    repl->demo_history[static_cast<std::size_t>(patch.entry)].text = patch.text;
  }
}

void ReplPool::drop(const std::vector<std::string>& names) {
  for (const std::string& name : names) {
    auto it = entries_.find(name);
    if (it == entries_.end())
      throw DemoLoadError("--drop-repls names unknown repl '" + name + "'");
    entries_.erase(it);
  }
}

LlmRepl* ReplPool::find(const std::string& name) {
  auto it = entries_.find(name);
  return it == entries_.end() ? nullptr : it->second.get();
}

const LlmRepl* ReplPool::find(const std::string& name) const {
  auto it = entries_.find(name);
  return it == entries_.end() ? nullptr : it->second.get();
}

LlmRepl& ReplPool::create(const std::string& name, const std::string& task) {
  auto repl = std::make_unique<LlmRepl>();
  repl->name = name;
  repl->task = task;
  repl->append(HistoryEntry::Kind::TaskBoundary, task);
  auto [it, inserted] = entries_.emplace(name, std::move(repl));
  return *it->second;
}

LlmRepl& ReplPool::add_demo(const std::string& name, const std::string& task) {
  auto repl = std::make_unique<LlmRepl>();
  repl->name = name;
  repl->demo_task = task;
  repl->task = task;
  repl->from_demo = true;
  auto [it, inserted] = entries_.emplace(name, std::move(repl));
  return *it->second;
}

LlmRepl* ReplPool::find_or_create_root() {
  if (LlmRepl* repl = find(kRootReplName)) return repl;
  return &create(kRootReplName, "");
}

void ReplPool::reset_for_episode(const std::string& root_task) {
  for (auto it = entries_.begin(); it != entries_.end();) {
    if (!it->second->from_demo && it->first != kRootReplName) {
      it = entries_.erase(it);
    } else {
      ++it;
    }
  }
  LlmRepl* root = find_or_create_root();
  for (auto& [name, repl] : entries_)
    repl->reset_for_episode(name == kRootReplName ? root_task : repl->demo_task);
  (void)root;
}

std::vector<std::string> ReplPool::names() const {
  std::vector<std::string> out;
  out.reserve(entries_.size());
  for (const auto& [name, _] : entries_) out.push_back(name);
  return out;
}

}  // namespace llmrepl::kernel
