// Command-line front end for the llmrepl runtime. Talks to the core only
// through the C API in llmrepl/llmrepl.h.

#include <cstdio>
#include <cstdlib>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "llmrepl/llmrepl.h"

namespace {

// Exit codes: 0 success, 1 task failure (--assert-sr not met, replay
// divergence), 2 configuration error.
constexpr int kExitOk = 0;
constexpr int kExitTaskFailure = 1;
constexpr int kExitConfigError = 2;

struct ConfigHandle {
  llmrepl_config* ptr = llmrepl_config_new();
  ~ConfigHandle() { llmrepl_config_free(ptr); }
};

int fail_with(const char* what, char* error) {
  std::fprintf(stderr, "%s: %s\n", what, error ? error : "unknown error");
  llmrepl_string_free(error);
  return kExitConfigError;
}

bool set_or_die(llmrepl_config* config, const std::string& key,
                const std::string& value) {
  char* error = nullptr;
  if (llmrepl_config_set(config, key.c_str(), value.c_str(), &error) !=
      LLMREPL_OK) {
    std::fprintf(stderr, "config error: %s\n", error ? error : key.c_str());
    llmrepl_string_free(error);
    return false;
  }
  return true;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"llmrepl: recursive LLM-REPL planning runtime"};
  app.require_subcommand(1);

  // ---- run ----
  auto* run = app.add_subcommand("run", "Run episode batches");
  std::string env_kind = "minishop";
  std::string catalog, tasks, transcript, demos, playbook;
  std::string http_base, model = "gpt-4o-mini", key_env = "OPENAI_API_KEY";
  double temperature = 0.0;
  bool no_subtask = false, debug_http = false;
  std::string drop_repls, inject_bugs, out_dir;
  int max_env_steps = 50, max_llm_calls = 100, max_depth = 16, workers = 1;
  long long seed = 0;
  double assert_sr = -1.0;
  run->add_option("--env", env_kind, "Environment: minishop, counter, transcript")
      ->check(CLI::IsMember({"minishop", "counter", "transcript"}));
  run->add_option("--catalog", catalog, "Catalog JSON (minishop)");
  run->add_option("--tasks", tasks, "Task list JSON (minishop)");
  run->add_option("--transcript", transcript, "Transcript JSON (transcript env)");
  run->add_option("--demos", demos, "Demo pool JSON");
  run->add_option("--playbook", playbook, "Scripted provider playbook JSON");
  run->add_option("--http-base", http_base, "Chat-completions base URL");
  run->add_option("--model", model, "Model id for the HTTP provider");
  run->add_option("--temperature", temperature, "Sampling temperature");
  run->add_option("--http-key-env", key_env, "Env var holding the API key");
  run->add_flag("--debug-http", debug_http, "Log redacted HTTP traffic");
  run->add_flag("--no-subtask-repls", no_subtask,
                "Convert child spawns into REPLNameError entries");
  run->add_option("--drop-repls", drop_repls,
                  "Comma-separated demo REPLs to exclude");
  run->add_option("--inject-bugs", inject_bugs, "Bug patch JSON for demos");
  run->add_option("--max-env-steps", max_env_steps, "Env step budget");
  run->add_option("--max-llm-calls", max_llm_calls, "LLM call budget");
  run->add_option("--max-depth", max_depth, "Spawn depth budget");
  run->add_option("--workers", workers, "Parallel episode workers");
  run->add_option("--seed", seed, "Recorded run seed");
  run->add_option("--out", out_dir, "Output directory for logs and report");
  run->add_option("--assert-sr", assert_sr,
                  "Exit 1 when success rate is below this fraction");

  // ---- replay ----
  auto* replay = app.add_subcommand("replay", "Replay a recorded transcript bundle");
  std::string r_transcript, r_demos, r_playbook, r_expected, r_out;
  replay->add_option("--transcript", r_transcript, "Transcript JSON")->required();
  replay->add_option("--demos", r_demos, "Demo pool JSON")->required();
  replay->add_option("--playbook", r_playbook, "Playbook JSON")->required();
  replay->add_option("--expected-log", r_expected,
                     "Recorded log to compare against (default: sibling "
                     "expected.log)");
  replay->add_option("--out", r_out, "Directory for the produced log");

  // ---- validate-demos ----
  auto* validate = app.add_subcommand("validate-demos", "Check a demo file");
  std::string v_demos, v_bugs;
  validate->add_option("--demos", v_demos, "Demo pool JSON")->required();
  validate->add_option("--inject-bugs", v_bugs, "Bug patch JSON to apply first");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfigError;
  }

  if (run->parsed()) {
    ConfigHandle config;
    std::vector<std::pair<std::string, std::string>> kv = {
        {"env.kind", env_kind},
        {"provider.model", model},
        {"provider.temperature", std::to_string(temperature)},
        {"provider.key_env", key_env},
        {"budgets.max_env_steps", std::to_string(max_env_steps)},
        {"budgets.max_llm_calls", std::to_string(max_llm_calls)},
        {"budgets.max_depth", std::to_string(max_depth)},
        {"run.workers", std::to_string(workers)},
        {"run.seed", std::to_string(seed)},
    };
    if (!catalog.empty()) kv.emplace_back("env.catalog", catalog);
    if (!tasks.empty()) kv.emplace_back("env.tasks", tasks);
    if (!transcript.empty()) kv.emplace_back("env.transcript", transcript);
    if (!demos.empty()) kv.emplace_back("demos.path", demos);
    if (!playbook.empty()) kv.emplace_back("provider.playbook", playbook);
    if (!http_base.empty()) kv.emplace_back("provider.http_base", http_base);
    if (!drop_repls.empty()) kv.emplace_back("demos.drop", drop_repls);
    if (!inject_bugs.empty()) kv.emplace_back("demos.inject_bugs", inject_bugs);
    if (no_subtask) kv.emplace_back("ablation.no_subtask_repls", "true");
    if (debug_http) kv.emplace_back("provider.debug", "true");
    if (!out_dir.empty()) kv.emplace_back("run.out_dir", out_dir);
    for (const auto& [key, value] : kv)
      if (!set_or_die(config.ptr, key, value)) return kExitConfigError;

    char* report_json = nullptr;
    char* error = nullptr;
    if (llmrepl_run(config.ptr, &report_json, &error) != LLMREPL_OK)
      return fail_with("run failed", error);
    nlohmann::json report = nlohmann::json::parse(report_json);
    llmrepl_string_free(report_json);
    std::printf("episodes: %d\n", report["episodes"].get<int>());
    std::printf("success rate: %.1f%%\n",
                report["success_rate"].get<double>() * 100.0);
    std::printf("mean score: %.3f\n", report["mean_score"].get<double>());
    std::printf("mean env steps: %.1f\n", report["mean_env_steps"].get<double>());
    std::printf("mean llm calls: %.1f\n", report["mean_llm_calls"].get<double>());
    if (assert_sr >= 0.0 &&
        report["success_rate"].get<double>() < assert_sr) {
      std::fprintf(stderr, "success rate below --assert-sr %.3f\n", assert_sr);
      return kExitTaskFailure;
    }
    return kExitOk;
  }

  if (replay->parsed()) {
    char* report_json = nullptr;
    char* error = nullptr;
    if (llmrepl_replay(r_transcript.c_str(), r_demos.c_str(),
                       r_playbook.c_str(),
                       r_expected.empty() ? nullptr : r_expected.c_str(),
                       r_out.empty() ? nullptr : r_out.c_str(), &report_json,
                       &error) != LLMREPL_OK)
      return fail_with("replay failed", error);
    nlohmann::json report = nlohmann::json::parse(report_json);
    llmrepl_string_free(report_json);
    if (report["pass"].get<bool>()) {
      std::printf("replay: pass (reward %.2f)\n", report["reward"].get<double>());
      return kExitOk;
    }
    std::printf("replay: FAIL\n");
    if (report.contains("divergence"))
      std::printf("%s\n", report["divergence"].get<std::string>().c_str());
    return kExitTaskFailure;
  }

  if (validate->parsed()) {
    char* report_json = nullptr;
    char* error = nullptr;
    if (llmrepl_validate_demos(v_demos.c_str(),
                               v_bugs.empty() ? nullptr : v_bugs.c_str(),
                               &report_json, &error) != LLMREPL_OK)
      return fail_with("validate failed", error);
    nlohmann::json report = nlohmann::json::parse(report_json);
    llmrepl_string_free(report_json);
    std::printf("%d repls\n", report["repls"].get<int>());
    for (const auto& [name, count] : report["statements"].items())
      std::printf("  %s: %d statements\n", name.c_str(), count.get<int>());
    for (const auto& warning : report["warnings"])
      std::printf("warning: %s entry %d: %s\n",
                  warning["repl"].get<std::string>().c_str(),
                  warning["entry"].get<int>(),
                  warning["message"].get<std::string>().c_str());
    return kExitOk;
  }

  return kExitConfigError;
}
