#include "gateway/scripted.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

namespace llmrepl::gateway {

ScriptedProvider ScriptedProvider::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ProviderError("cannot open playbook file: " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return from_json_text(buffer.str(), path);
}

ScriptedProvider ScriptedProvider::from_json_text(const std::string& text,
                                                  const std::string& origin) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ProviderError("malformed playbook " + origin + ": " + e.what());
  }
  if (!doc.is_object())
    throw ProviderError("playbook " + origin +
                        " must map REPL names to completion lists");
  ScriptedProvider provider;
  for (const auto& [name, entries] : doc.items()) {
    if (!entries.is_array())
      throw ProviderError("playbook " + origin + ": queue for '" + name +
                          "' is not a list");
    for (const auto& entry : entries) {
      if (entry.is_string()) {
        provider.push(name, entry.get<std::string>());
      } else {
        std::optional<std::string> prefix;
        if (entry.contains("expect_prefix"))
          prefix = entry["expect_prefix"].get<std::string>();
        provider.push(name, entry.at("completion").get<std::string>(), prefix);
      }
    }
  }
  return provider;
}

void ScriptedProvider::push(const std::string& repl_name,
                            std::string completion,
                            std::optional<std::string> expect_prefix) {
  std::lock_guard<std::mutex> lock(mu_);
  queues_[repl_name].push_back(
      Entry{std::move(expect_prefix), std::move(completion)});
}

std::string ScriptedProvider::complete(const Prompt& prompt,
                                       const CompletionParams&) {
  std::lock_guard<std::mutex> lock(mu_);
  auto it = queues_.find(prompt.repl_name);
  int turn = ++turns_[prompt.repl_name];
  if (it == queues_.end() || it->second.empty())
    throw ProviderError("playbook exhausted for repl '" + prompt.repl_name +
                        "' (turn " + std::to_string(turn) + ")");
  Entry entry = std::move(it->second.front());
  it->second.pop_front();
  if (entry.expect_prefix &&
      prompt.transcript.rfind(*entry.expect_prefix, 0) != 0)
    throw ProviderError("playbook prompt assertion failed for repl '" +
                        prompt.repl_name + "' at turn " + std::to_string(turn));
  return entry.completion;
}

bool ScriptedProvider::exhausted() const {
  std::lock_guard<std::mutex> lock(mu_);
  for (const auto& [_, queue] : queues_)
    if (!queue.empty()) return false;
  return true;
}

}  // namespace llmrepl::gateway
