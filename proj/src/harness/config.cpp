#include "harness/config.hpp"

#include <sstream>

namespace llmrepl::harness {

namespace {

int to_int(const std::string& key, const std::string& value) {
  try {
    std::size_t used = 0;
    int parsed = std::stoi(value, &used);
    if (used == value.size()) return parsed;
  } catch (const std::exception&) {
  }
  throw ConfigError("config key '" + key + "' expects an integer, got '" +
                    value + "'");
}

double to_double(const std::string& key, const std::string& value) {
  try {
    std::size_t used = 0;
    double parsed = std::stod(value, &used);
    if (used == value.size()) return parsed;
  } catch (const std::exception&) {
  }
  throw ConfigError("config key '" + key + "' expects a number, got '" + value +
                    "'");
}

bool to_bool(const std::string& key, const std::string& value) {
  if (value == "true" || value == "1" || value == "yes") return true;
  if (value == "false" || value == "0" || value == "no") return false;
  throw ConfigError("config key '" + key + "' expects a boolean, got '" +
                    value + "'");
}

std::vector<std::string> split_csv(const std::string& value) {
  std::vector<std::string> out;
  std::stringstream ss(value);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

}  // namespace

void RunConfig::set(const std::string& key, const std::string& value) {
  if (key == "env.kind") env_kind = value;
  else if (key == "env.catalog") catalog_path = value;
  else if (key == "env.tasks") tasks_path = value;
  else if (key == "env.transcript") transcript_path = value;
  else if (key == "env.page_size") page_size = to_int(key, value);
  else if (key == "provider.playbook") playbook_path = value;
  else if (key == "provider.http_base") http_base = value;
  else if (key == "provider.model") http_model = value;
  else if (key == "provider.temperature") temperature = to_double(key, value);
  else if (key == "provider.key_env") http_key_env = value;
  else if (key == "provider.debug") debug_http = to_bool(key, value);
  else if (key == "demos.path") demos_path = value;
  else if (key == "demos.drop") drop_repls = split_csv(value);
  else if (key == "demos.inject_bugs") inject_bugs_path = value;
  else if (key == "ablation.no_subtask_repls") no_subtask_repls = to_bool(key, value);
  else if (key == "budgets.max_env_steps") budgets.max_env_steps = to_int(key, value);
  else if (key == "budgets.max_llm_calls") budgets.max_llm_calls = to_int(key, value);
  else if (key == "budgets.max_depth") budgets.max_spawn_depth = to_int(key, value);
  else if (key == "run.seed") seed = to_int(key, value);
  else if (key == "run.workers") workers = to_int(key, value);
  else if (key == "run.out_dir") out_dir = value;
  else if (key == "run.assert_sr") assert_sr = to_double(key, value);
  else throw ConfigError("unknown config key '" + key + "'");
}

void RunConfig::validate() const {
  if (env_kind != "minishop" && env_kind != "counter" && env_kind != "transcript")
    throw ConfigError("unknown env kind '" + env_kind + "'");
  if (env_kind == "minishop") {
    if (catalog_path.empty()) throw ConfigError("minishop requires --catalog");
    if (tasks_path.empty()) throw ConfigError("minishop requires --tasks");
  }
  if (env_kind == "transcript" && transcript_path.empty())
    throw ConfigError("transcript env requires a transcript file");
  bool scripted = !playbook_path.empty();
  bool http = !http_base.empty();
  if (scripted == http)
    throw ConfigError(
        "exactly one provider must be configured: --playbook or --http-base");
  if (workers < 1) throw ConfigError("--workers must be at least 1");
  if (budgets.max_env_steps < 1 || budgets.max_llm_calls < 1 ||
      budgets.max_spawn_depth < 1)
    throw ConfigError("budgets must be positive");
  if (demos_path.empty() && !drop_repls.empty())
    throw ConfigError("--drop-repls requires --demos");
  if (demos_path.empty() && !inject_bugs_path.empty())
    throw ConfigError("--inject-bugs requires --demos");
}

}  // namespace llmrepl::harness
