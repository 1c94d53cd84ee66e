#include "llmrepl/llmrepl.h"

#include <cstdlib>
#include <cstring>
#include <string>

#include "envs/env.hpp"
#include "gateway/provider.hpp"
#include "harness/config.hpp"
#include "harness/runner.hpp"
#include "kernel/pool.hpp"

using llmrepl::harness::ConfigError;
using llmrepl::harness::RunConfig;

struct llmrepl_config {
  RunConfig config;
};

namespace {

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out) std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

void set_error(char** error_out, const std::string& message) {
  if (error_out) *error_out = dup_string(message);
}

template <class Fn>
llmrepl_status guarded(char** error_out, Fn&& fn) {
  try {
    return fn();
  } catch (const ConfigError& e) {
    set_error(error_out, e.what());
    return LLMREPL_ERR_CONFIG;
  } catch (const llmrepl::kernel::DemoLoadError& e) {
    set_error(error_out, e.what());
    return LLMREPL_ERR_IO;
  } catch (const llmrepl::envs::EnvError& e) {
    set_error(error_out, e.what());
    return LLMREPL_ERR_IO;
  } catch (const llmrepl::gateway::ProviderError& e) {
    set_error(error_out, e.what());
    return LLMREPL_ERR_IO;
  } catch (const std::exception& e) {
    set_error(error_out, e.what());
    return LLMREPL_ERR_RUNTIME;
  }
}

}  // namespace

extern "C" {

const char* llmrepl_version(void) { return "0.1.0"; }

void llmrepl_string_free(char* s) { std::free(s); }

llmrepl_config* llmrepl_config_new(void) { return new llmrepl_config(); }

void llmrepl_config_free(llmrepl_config* config) { delete config; }

llmrepl_status llmrepl_config_set(llmrepl_config* config, const char* key,
                                  const char* value, char** error_out) {
  if (!config || !key || !value) {
    set_error(error_out, "config, key and value must be non-null");
    return LLMREPL_ERR_CONFIG;
  }
  return guarded(error_out, [&] {
    config->config.set(key, value);
    return LLMREPL_OK;
  });
}

llmrepl_status llmrepl_run(const llmrepl_config* config,
                           char** report_json_out, char** error_out) {
  if (!config) {
    set_error(error_out, "config must be non-null");
    return LLMREPL_ERR_CONFIG;
  }
  return guarded(error_out, [&] {
    llmrepl::harness::MetricsReport report =
        llmrepl::harness::cmd_run(config->config);
    if (report_json_out) *report_json_out = dup_string(report.to_json());
    return LLMREPL_OK;
  });
}

llmrepl_status llmrepl_replay(const char* transcript_path,
                              const char* demos_path,
                              const char* playbook_path,
                              const char* expected_log_path,
                              const char* out_dir, char** report_json_out,
                              char** error_out) {
  if (!transcript_path || !demos_path || !playbook_path) {
    set_error(error_out, "transcript, demos and playbook paths are required");
    return LLMREPL_ERR_CONFIG;
  }
  return guarded(error_out, [&] {
    llmrepl::harness::ReplayReport report = llmrepl::harness::cmd_replay(
        transcript_path, demos_path, playbook_path,
        expected_log_path ? expected_log_path : "", out_dir ? out_dir : "");
    if (report_json_out) *report_json_out = dup_string(report.to_json());
    return LLMREPL_OK;
  });
}

llmrepl_status llmrepl_validate_demos(const char* demos_path,
                                      const char* inject_bugs_path,
                                      char** report_json_out,
                                      char** error_out) {
  if (!demos_path) {
    set_error(error_out, "demos path is required");
    return LLMREPL_ERR_CONFIG;
  }
  return guarded(error_out, [&] {
    llmrepl::harness::ValidateReport report =
        llmrepl::harness::cmd_demo_validate(
            demos_path, inject_bugs_path ? inject_bugs_path : "");
    if (report_json_out) *report_json_out = dup_string(report.to_json());
    return LLMREPL_OK;
  });
}

}  // extern "C"
