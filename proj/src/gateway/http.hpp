#pragma once

#include <string>

#include "gateway/provider.hpp"

namespace llmrepl::gateway {

struct HttpProviderConfig {
  std::string base_url;             // e.g. https://api.example.com/v1
  std::string model = "gpt-4o-mini";
  double temperature = 0.0;
  std::string key_env = "OPENAI_API_KEY";  // credential variable name
  bool debug = false;               // log redacted request/response bodies
  int max_attempts = 5;
  int backoff_base_ms = 1000;       // doubled per retry
};

// Chat-completions client: POST {base}/chat/completions with the prompt as
// a system + user message pair. Transport errors and rate-limit responses
// retry with exponential backoff; other non-2xx statuses abort.
class HttpProvider : public LlmProvider {
 public:
  explicit HttpProvider(HttpProviderConfig config);

  std::string complete(const Prompt& prompt,
                       const CompletionParams& params) override;

 private:
  HttpProviderConfig config_;
  std::string scheme_host_;  // scheme://host[:port]
  std::string path_prefix_;  // anything after the host
};

}  // namespace llmrepl::gateway
