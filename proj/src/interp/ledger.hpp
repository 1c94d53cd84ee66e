#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>

#include "interp/value.hpp"

namespace llmrepl::interp {

// Per-block record of resolved context-sensitive calls. Re-execution hits
// the cache for indices <= recorded count; index recorded+1 executes fresh.
class CallLedger {
 public:
  struct Entry {
    Value result;
    std::string printed;  // text a fresh print emitted, if any
  };

  int recorded_count(const std::string& name) const {
    auto it = counts_.find(name);
    return it == counts_.end() ? 0 : it->second;
  }

  const Entry* lookup(const std::string& name, int index) const {
    auto it = cache_.find({name, index});
    return it == cache_.end() ? nullptr : &it->second;
  }

  // Records the resolution of call (name, index). Indices arrive in order:
  // index must be recorded_count(name) + 1.
  void record(const std::string& name, int index, Value result,
              std::string printed = "") {
    counts_[name] = index;
    cache_[{name, index}] = Entry{std::move(result), std::move(printed)};
  }

  void clear() {
    counts_.clear();
    cache_.clear();
  }

  std::size_t size() const { return cache_.size(); }

 private:
  std::map<std::string, int> counts_;
  std::map<std::pair<std::string, int>, Entry> cache_;
};

}  // namespace llmrepl::interp
