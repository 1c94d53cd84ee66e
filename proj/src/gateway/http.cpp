#include "gateway/http.hpp"

#include <chrono>
#include <cstdlib>
#include <iostream>
#include <thread>

#ifdef LLMREPL_HAVE_OPENSSL
#define CPPHTTPLIB_OPENSSL_SUPPORT
#endif
#include <httplib.h>
#include <json.hpp>

namespace llmrepl::gateway {

namespace {

bool retryable_status(int status) {
  return status == 429 || (status >= 500 && status < 600);
}

}  // namespace

HttpProvider::HttpProvider(HttpProviderConfig config)
    : config_(std::move(config)) {
  const std::string& url = config_.base_url;
  std::size_t scheme_end = url.find("://");
  if (scheme_end == std::string::npos)
    throw ProviderError("base url must include a scheme: " + url);
  std::size_t path_start = url.find('/', scheme_end + 3);
  if (path_start == std::string::npos) {
    scheme_host_ = url;
  } else {
    scheme_host_ = url.substr(0, path_start);
    path_prefix_ = url.substr(path_start);
    while (!path_prefix_.empty() && path_prefix_.back() == '/')
      path_prefix_.pop_back();
  }
}

std::string HttpProvider::complete(const Prompt& prompt,
                                   const CompletionParams& params) {
  nlohmann::json body = {
      {"model", params.model.empty() || params.model == "scripted"
                    ? config_.model
                    : params.model},
      {"messages",
       {{{"role", "system"}, {"content", prompt.preamble}},
        {{"role", "user"}, {"content", prompt.transcript}}}},
      {"temperature", params.temperature},
      {"max_tokens", params.max_tokens},
      {"stop", params.stop},
  };
  std::string payload = body.dump();

  httplib::Headers headers;
  const char* key = std::getenv(config_.key_env.c_str());
  if (key && *key) headers.emplace("Authorization", std::string("Bearer ") + key);

  std::string path = path_prefix_ + "/chat/completions";
  std::string last_error;
  for (int attempt = 0; attempt < config_.max_attempts; ++attempt) {
    if (attempt > 0) {
      auto delay = std::chrono::milliseconds(config_.backoff_base_ms << (attempt - 1));
      std::this_thread::sleep_for(delay);
    }
    if (config_.debug)
      std::cerr << "[llm-http] POST " << scheme_host_ << path
                << " body=" << payload << "\n";
    httplib::Client client(scheme_host_);
    client.set_connection_timeout(30);
    client.set_read_timeout(120);
    httplib::Result res = client.Post(path, headers, payload, "application/json");
    if (!res) {
      last_error = "transport error: " + httplib::to_string(res.error());
      continue;
    }
    if (config_.debug)
      std::cerr << "[llm-http] status=" << res->status
                << " body=" << res->body << "\n";
    if (res->status >= 200 && res->status < 300) {
      try {
        nlohmann::json reply = nlohmann::json::parse(res->body);
        return reply.at("choices").at(0).at("message").at("content")
            .get<std::string>();
      } catch (const nlohmann::json::exception& e) {
        throw ProviderError(std::string("unexpected completion payload: ") +
                            e.what());
      }
    }
    if (retryable_status(res->status)) {
      last_error = "status " + std::to_string(res->status);
      continue;
    }
    throw ProviderError("completion request failed with status " +
                        std::to_string(res->status) + ": " + res->body);
  }
  throw ProviderError("completion request failed after " +
                      std::to_string(config_.max_attempts) +
                      " attempts (" + last_error + ")");
}

}  // namespace llmrepl::gateway
