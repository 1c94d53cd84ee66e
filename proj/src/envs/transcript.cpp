#include "envs/transcript.hpp"

#include <fstream>

#include <json.hpp>

namespace llmrepl::envs {

TranscriptEnv TranscriptEnv::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw EnvError("cannot open transcript file: " + path);
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw EnvError("malformed transcript file " + path + ": " + e.what());
  }
  std::string task;
  const nlohmann::json* steps_json = &doc;
  // Either a bare array of {obs, action} pairs, or an object wrapping the
  // array with the episode's task line.
  if (doc.is_object()) {
    task = doc.value("task", "");
    if (!doc.contains("steps"))
      throw EnvError("transcript file " + path + " lacks a steps array");
    steps_json = &doc["steps"];
  }
  if (!steps_json->is_array())
    throw EnvError("transcript file " + path + " is not an array of steps");
  std::vector<Step> steps;
  for (const auto& entry : *steps_json) {
    Step s;
    s.obs = entry.value("obs", "");
    s.action = entry.value("action", "");
    steps.push_back(std::move(s));
  }
  return TranscriptEnv(std::move(task), std::move(steps));
}

std::string TranscriptEnv::reset(int) {
  next_ = 0;
  done_ = false;
  diverged_ = false;
  return steps_.empty() ? "" : steps_[0].obs;
}

EnvResult TranscriptEnv::step(const std::string& action) {
  if (done_) throw EnvError("step after done");
  if (next_ >= steps_.size() || steps_[next_].action.empty()) {
    done_ = true;
    diverged_ = true;
    return {"Transcript divergence: expected no further actions, got " + action,
            0.0, true};
  }
  if (action != steps_[next_].action) {
    done_ = true;
    diverged_ = true;
    return {"Transcript divergence: expected " + steps_[next_].action +
                ", got " + action,
            0.0, true};
  }
  ++next_;
  if (next_ >= steps_.size()) {
    done_ = true;
    return {"", 1.0, true};  // script exhausted: exact replay
  }
  return {steps_[next_].obs, 0.0, false};
}

double TranscriptEnv::score() const {
  if (diverged_) return 0.0;
  if (steps_.empty()) return 1.0;
  return next_ >= steps_.size() ? 1.0 : 0.0;
}

}  // namespace llmrepl::envs
