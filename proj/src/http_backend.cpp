#define CPPHTTPLIB_OPENSSL_SUPPORT
#include "httplib.h"

#include "fnh/http_backend.hpp"

#include <cmath>
#include <cstdlib>
#include <thread>

#include "json.hpp"

#include "fnh/errors.hpp"
#include "fnh/json_io.hpp"
#include "fnh/util.hpp"

namespace fnh {

namespace {

using nlohmann::json;

std::string body_excerpt(const std::string& body) {
  constexpr std::size_t kMax = 200;
  if (body.size() <= kMax) return body;
  return body.substr(0, kMax) + "...";
}

bool retryable_status(int status) {
  return status == 408 || status == 429 || status >= 500;
}

// Token-level probabilities for the first generated token, when present.
std::optional<LabelProbs> extract_label_probs(const json& choice) {
  auto logprobs = choice.find("logprobs");
  if (logprobs == choice.end() || logprobs->is_null()) return std::nullopt;
  auto content = logprobs->find("content");
  if (content == logprobs->end() || !content->is_array() || content->empty()) return std::nullopt;

  const json& first = content->front();
  LabelProbs probs;
  bool any = false;
  auto consider = [&probs, &any](const std::string& token, double logprob) {
    std::string word = to_lower(trim(token));
    if (word == "true") {
      probs.true_prob = std::max(probs.true_prob, std::exp(logprob));
      any = true;
    } else if (word == "false") {
      probs.false_prob = std::max(probs.false_prob, std::exp(logprob));
      any = true;
    }
  };
  if (first.contains("token") && first.contains("logprob")) {
    consider(first.at("token").get<std::string>(), first.at("logprob").get<double>());
  }
  if (first.contains("top_logprobs")) {
    for (const json& alt : first.at("top_logprobs")) {
      if (alt.contains("token") && alt.contains("logprob")) {
        consider(alt.at("token").get<std::string>(), alt.at("logprob").get<double>());
      }
    }
  }
  if (!any) return std::nullopt;
  return probs;
}

}  // namespace

HttpBackendConfig http_config_from_env() {
  HttpBackendConfig config;
  if (const char* base = std::getenv("FNH_API_BASE")) config.base_url = base;
  if (const char* key = std::getenv("FNH_API_KEY")) config.api_key = key;
  if (config.base_url.empty()) {
    throw ConfigError("FNH_API_BASE is not set (http backend needs an endpoint)");
  }
  return config;
}

void HttpBackend::FlightLimiter::acquire() {
  std::unique_lock lock(mutex_);
  cv_.wait(lock, [this] { return available_ > 0; });
  --available_;
}

void HttpBackend::FlightLimiter::release() {
  {
    std::lock_guard lock(mutex_);
    ++available_;
  }
  cv_.notify_one();
}

HttpBackend::HttpBackend(HttpBackendConfig config)
    : config_(std::move(config)), limiter_(std::max(1, config_.max_in_flight)) {
  if (config_.base_url.empty()) throw ConfigError("http backend base URL is empty");

  std::string url = config_.base_url;
  std::size_t scheme_end = url.find("://");
  std::size_t path_start =
      url.find('/', scheme_end == std::string::npos ? 0 : scheme_end + 3);
  if (path_start == std::string::npos) {
    host_ = url;
  } else {
    host_ = url.substr(0, path_start);
    path_prefix_ = url.substr(path_start);
    while (!path_prefix_.empty() && path_prefix_.back() == '/') path_prefix_.pop_back();
  }
}

std::string HttpBackend::id() const { return "http:" + config_.base_url; }

ChatResponse HttpBackend::perform(const ChatRequest& request) {
  json body = {
      {"model", request.model},
      {"messages", request.messages},
      {"temperature", request.temperature},
  };
  if (request.want_label_probs) {
    body["logprobs"] = true;
    body["top_logprobs"] = config_.top_logprobs;
  }

  httplib::Client client(host_);
  client.set_connection_timeout(config_.timeout);
  client.set_read_timeout(config_.timeout);
  httplib::Headers headers;
  if (!config_.api_key.empty()) {
    headers.emplace("Authorization", "Bearer " + config_.api_key);
  }

  auto result =
      client.Post(path_prefix_ + "/chat/completions", headers, body.dump(), "application/json");
  if (!result) {
    throw BackendError("transport error: " + httplib::to_string(result.error()), 1, true);
  }
  if (retryable_status(result->status)) {
    throw BackendError("server returned status " + std::to_string(result->status), 1, true);
  }
  if (result->status != 200) {
    throw BackendError("server returned status " + std::to_string(result->status) + ": " +
                       body_excerpt(result->body));
  }

  json payload;
  try {
    payload = json::parse(result->body);
    const json& choice = payload.at("choices").at(0);
    ChatResponse response;
    response.text = choice.at("message").at("content").get<std::string>();
    if (request.want_label_probs) response.label_probs = extract_label_probs(choice);
    return response;
  } catch (const json::exception& ex) {
    throw BackendError(std::string("malformed server reply: ") + ex.what() + "; body: " +
                       body_excerpt(result->body));
  }
}

ChatResponse HttpBackend::complete(const ChatRequest& request) {
  limiter_.acquire();
  struct Release {
    FlightLimiter& limiter;
    ~Release() { limiter.release(); }
  } release{limiter_};

  std::chrono::milliseconds backoff = config_.initial_backoff;
  for (int attempt = 1;; ++attempt) {
    try {
      return perform(request);
    } catch (const BackendError& ex) {
      if (!ex.transport() || attempt >= config_.max_attempts) {
        throw BackendError(std::string(ex.what()) + " (after " + std::to_string(attempt) +
                               " attempt" + (attempt == 1 ? "" : "s") + ")",
                           attempt, ex.transport());
      }
      std::this_thread::sleep_for(backoff);
      backoff *= 2;
    }
  }
}

}  // namespace fnh
