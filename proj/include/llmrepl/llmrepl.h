/* C API for the llmrepl runtime: recursive LLM-REPL planning over text
 * environments. All functions are thread-safe for distinct handles.
 *
 * Conventions: functions return LLMREPL_OK (0) on success, a nonzero
 * status otherwise. When `error_out` is non-NULL it receives a malloc'd
 * message on failure; free it (and every returned string) with
 * llmrepl_string_free.
 */
#ifndef LLMREPL_LLMREPL_H
#define LLMREPL_LLMREPL_H

#ifdef __cplusplus
extern "C" {
#endif

typedef enum llmrepl_status {
  LLMREPL_OK = 0,
  LLMREPL_ERR_CONFIG = 1,  /* invalid configuration or arguments */
  LLMREPL_ERR_IO = 2,      /* missing or malformed input files */
  LLMREPL_ERR_RUNTIME = 3, /* episode execution failed */
} llmrepl_status;

/* Opaque run configuration. */
typedef struct llmrepl_config llmrepl_config;

const char* llmrepl_version(void);

void llmrepl_string_free(char* s);

llmrepl_config* llmrepl_config_new(void);
void llmrepl_config_free(llmrepl_config* config);

/* Sets one dotted config key, e.g.
 *   env.kind = minishop | counter | transcript
 *   env.catalog, env.tasks, env.transcript, env.page_size
 *   provider.playbook | provider.http_base, provider.model,
 *   provider.temperature, provider.key_env, provider.debug
 *   demos.path, demos.drop (comma list), demos.inject_bugs
 *   ablation.no_subtask_repls
 *   budgets.max_env_steps, budgets.max_llm_calls, budgets.max_depth
 *   run.seed, run.workers, run.out_dir, run.assert_sr
 */
llmrepl_status llmrepl_config_set(llmrepl_config* config, const char* key,
                                  const char* value, char** error_out);

/* Runs every configured task; writes report.json and per-episode logs to
 * run.out_dir when set. report_json_out receives the metrics report. */
llmrepl_status llmrepl_run(const llmrepl_config* config,
                           char** report_json_out, char** error_out);

/* Replays a recorded transcript bundle with a scripted playbook. The
 * report's "pass" field is 1 only when the episode reaches reward 1.0 and
 * the produced trace matches expected_log (or a sibling expected.log)
 * modulo trailing whitespace. */
llmrepl_status llmrepl_replay(const char* transcript_path,
                              const char* demos_path,
                              const char* playbook_path,
                              const char* expected_log_path, /* or NULL */
                              const char* out_dir,           /* or NULL */
                              char** report_json_out, char** error_out);

/* Validates a demo file (optionally with bug patches applied): parses
 * every code entry and reports per-REPL statement counts plus syntax
 * warnings. */
llmrepl_status llmrepl_validate_demos(const char* demos_path,
                                      const char* inject_bugs_path, /* or NULL */
                                      char** report_json_out, char** error_out);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* LLMREPL_LLMREPL_H */
