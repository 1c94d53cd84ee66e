#pragma once

#include <string>
#include <vector>

#include "harness/config.hpp"

namespace llmrepl::harness {

struct EpisodeRow {
  int index = 0;  // 1-based episode number
  int task_id = 0;
  std::string task;
  bool success = false;
  double score = 0.0;
  int env_steps = 0;
  int llm_calls = 0;
  std::string reason;
};

struct MetricsReport {
  int episodes = 0;
  double success_rate = 0.0;
  double mean_score = 0.0;
  double mean_env_steps = 0.0;
  double mean_llm_calls = 0.0;
  long long seed = 0;
  std::vector<EpisodeRow> rows;

  std::string to_json() const;
};

struct ReplayReport {
  bool pass = false;
  double reward = 0.0;
  std::string divergence;  // first-difference context when the logs differ
  std::string produced_log;

  std::string to_json() const;
};

struct DemoDiagnostic {
  std::string repl;
  int entry = 0;
  std::string message;
};

struct ValidateReport {
  int repl_count = 0;
  std::vector<std::pair<std::string, int>> statements_per_repl;
  std::vector<DemoDiagnostic> diagnostics;  // reported, accepted with warning

  std::string to_json() const;
};

// Runs every task in the configured environment, writing report.json plus
// per-episode episode-N.log / episode-N.jsonl under config.out_dir.
MetricsReport cmd_run(const RunConfig& config);

// Replays a recorded transcript bundle. Pass requires reward 1.0 and,
// when an expected log is given (or found next to the transcript as
// expected.log), a byte match modulo trailing whitespace.
ReplayReport cmd_replay(const std::string& transcript_path,
                        const std::string& demos_path,
                        const std::string& playbook_path,
                        const std::string& expected_log_path = "",
                        const std::string& out_dir = "");

// Parses every code entry of a demo file; bug-injected demos load with
// warnings rather than errors.
ValidateReport cmd_demo_validate(const std::string& demos_path,
                                 const std::string& inject_bugs_path = "");

// Line comparison used by replay: trailing whitespace and trailing blank
// lines are ignored. Returns an empty string on match, else a first-
// difference description.
std::string compare_logs(const std::string& expected, const std::string& actual);

}  // namespace llmrepl::harness
