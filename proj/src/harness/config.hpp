#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "kernel/episode.hpp"

namespace llmrepl::harness {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  // environment
  std::string env_kind = "minishop";  // minishop | counter | transcript
  std::string catalog_path;
  std::string tasks_path;
  std::string transcript_path;
  int page_size = 3;

  // provider (exactly one kind)
  std::string playbook_path;
  std::string http_base;
  std::string http_model = "gpt-4o-mini";
  double temperature = 0.0;
  std::string http_key_env = "OPENAI_API_KEY";
  bool debug_http = false;

  // demonstrations and ablations
  std::string demos_path;
  std::vector<std::string> drop_repls;
  std::string inject_bugs_path;
  bool no_subtask_repls = false;

  kernel::Budgets budgets;
  long long seed = 0;
  int workers = 1;
  std::string out_dir;
  std::optional<double> assert_sr;

  // Applies a dotted key ("budgets.max_llm_calls", "provider.playbook", ...)
  // used by the C API; throws ConfigError on unknown keys or bad values.
  void set(const std::string& key, const std::string& value);
  // Throws ConfigError unless the configuration is runnable.
  void validate() const;
};

}  // namespace llmrepl::harness
