#include "envs/counter.hpp"

namespace llmrepl::envs {

std::string CounterEnv::reset(int) {
  heard_.clear();
  done_ = false;
  score_ = 0.0;
  return "Counting game. Say each number with act(n).";
}

EnvResult CounterEnv::step(const std::string& action) {
  if (done_) throw EnvError("step after done");
  std::size_t used = 0;
  long long n = 0;
  bool ok = false;
  try {
    n = std::stoll(action, &used);
    ok = used == action.size() && !action.empty();
  } catch (const std::exception&) {
    ok = false;
  }
  if (!ok) {
    done_ = true;
    score_ = 0.0;
    return {"That is not a number.", 0.0, true};
  }
  heard_.push_back(n);
  if (heard_.size() >= 4) {
    done_ = true;
    score_ = heard_ == std::vector<long long>{1, 2, 3, 4} ? 1.0 : 0.0;
    return {"Heard " + std::to_string(n) + ". Done.", score_, true};
  }
  return {"Heard " + std::to_string(n) + ".", 0.0, false};
}

}  // namespace llmrepl::envs
