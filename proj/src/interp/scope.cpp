#include "interp/scope.hpp"

#include <atomic>

namespace llmrepl::interp {

namespace {
std::atomic<long long> g_snapshot_counter{0};
}

Scope Scope::snapshot() const {
  Scope copy;
  std::unordered_map<const void*, Value> memo;
  for (const auto& [name, value] : bindings_)
    copy.bindings_.emplace(name, value.deep_copy(memo));
  copy.snapshot_id_ = ++g_snapshot_counter;
  return copy;
}

bool Scope::identical_to(const Scope& other) const {
  if (bindings_.size() != other.bindings_.size()) return false;
  auto it = other.bindings_.begin();
  for (const auto& [name, value] : bindings_) {
    if (name != it->first || !value.equals(it->second)) return false;
    ++it;
  }
  return true;
}

}  // namespace llmrepl::interp
