#pragma once

#include <map>
#include <optional>
#include <string>

#include "interp/value.hpp"

namespace llmrepl::interp {

// Variable bindings of one LLM-REPL. REPLs never share scopes; values cross
// REPL boundaries only as deep copies.
class Scope {
 public:
  const Value* lookup(const std::string& name) const {
    auto it = bindings_.find(name);
    return it == bindings_.end() ? nullptr : &it->second;
  }
  void bind(const std::string& name, Value v) { bindings_[name] = std::move(v); }
  bool contains(const std::string& name) const {
    return bindings_.count(name) != 0;
  }
  void clear() { bindings_.clear(); }
  std::size_t size() const { return bindings_.size(); }

  // Deep copy with a shared memo so aliasing between bindings survives.
  Scope snapshot() const;

  bool identical_to(const Scope& other) const;

  long long snapshot_id() const { return snapshot_id_; }

  const std::map<std::string, Value>& bindings() const { return bindings_; }

 private:
  std::map<std::string, Value> bindings_;
  long long snapshot_id_ = 0;
};

}  // namespace llmrepl::interp
