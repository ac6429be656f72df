#pragma once

#include <chrono>
#include <condition_variable>
#include <mutex>
#include <string>

#include "fnh/backend.hpp"

namespace fnh {

struct HttpBackendConfig {
  std::string base_url;   // e.g. "https://api.example.com/v1"
  std::string api_key;
  int max_attempts = 3;
  std::chrono::milliseconds initial_backoff{250};
  int max_in_flight = 4;
  int top_logprobs = 5;
  std::chrono::seconds timeout{120};
};

// Reads FNH_API_BASE and FNH_API_KEY; the base URL is required.
HttpBackendConfig http_config_from_env();

// Chat-completion client over the de-facto industry request shape
// (model/messages/temperature, optional per-token log-probabilities).
// Transport errors are retried max_attempts times with exponential backoff;
// malformed replies fail immediately with a body excerpt. A semaphore bounds
// concurrent in-flight requests.
class HttpBackend : public ChatBackend {
 public:
  explicit HttpBackend(HttpBackendConfig config);

  ChatResponse complete(const ChatRequest& request) override;
  std::string id() const override;

 private:
  class FlightLimiter {
   public:
    explicit FlightLimiter(int limit) : available_(limit) {}
    void acquire();
    void release();

   private:
    std::mutex mutex_;
    std::condition_variable cv_;
    int available_;
  };

  ChatResponse perform(const ChatRequest& request);

  HttpBackendConfig config_;
  std::string host_;        // scheme://host[:port]
  std::string path_prefix_;
  FlightLimiter limiter_;
};

}  // namespace fnh
