#include "fnh/backend.hpp"

#include <fstream>

#include "json.hpp"

#include "fnh/errors.hpp"
#include "fnh/json_io.hpp"
#include "fnh/parsing.hpp"
#include "fnh/util.hpp"

namespace fnh {

namespace {
using nlohmann::json;
}

std::string cache_key(const std::string& backend_id, const ChatRequest& request) {
  json canonical = {
      {"backend", backend_id},
      {"model", request.model},
      {"messages", request.messages},
      {"temperature", request.temperature},
      {"want_label_probs", request.want_label_probs},
  };
  return sha256_hex(canonical.dump());
}

ResponseCache::ResponseCache(std::filesystem::path root) : root_(std::move(root)) {
  std::filesystem::create_directories(root_);
}

std::filesystem::path ResponseCache::entry_path(const std::string& digest) const {
  return root_ / digest.substr(0, 2) / (digest + ".json");
}

std::optional<ChatResponse> ResponseCache::get(const std::string& digest) const {
  std::filesystem::path path = entry_path(digest);
  std::ifstream in(path, std::ios::binary);
  if (!in) return std::nullopt;
  json entry;
  try {
    in >> entry;
    ChatResponse response = entry.at("response").get<ChatResponse>();
    response.from_cache = true;
    return response;
  } catch (const json::exception& ex) {
    throw BackendError("corrupt cache entry " + path.string() + ": " + ex.what());
  }
}

void ResponseCache::put(const std::string& digest, const ChatRequest& request,
                        const ChatResponse& response) const {
  json entry = {
      {"request", request},
      {"response", response},
      {"timestamp", iso8601_utc_now()},
  };
  write_text_file_atomic(entry_path(digest), entry.dump(2) + "\n");
}

CachingBackend::CachingBackend(ChatBackend& inner,
                               const std::optional<std::filesystem::path>& cache_dir)
    : inner_(inner) {
  if (cache_dir.has_value()) cache_.emplace(*cache_dir);
}

ChatResponse CachingBackend::complete(const ChatRequest& request) {
  {
    std::lock_guard lock(mutex_);
    ++stats_.calls;
    if (!request.sample_id.empty()) ++stats_.per_sample_calls[request.sample_id];
  }

  std::string digest;
  if (cache_.has_value() && !request.bypass_cache) {
    digest = cache_key(inner_.id(), request);
    if (auto cached = cache_->get(digest)) {
      std::lock_guard lock(mutex_);
      ++stats_.cache_hits;
      return *cached;
    }
  }

  {
    std::lock_guard lock(mutex_);
    ++stats_.upstream_calls;
  }
  ChatResponse response = inner_.complete(request);
  response.from_cache = false;
  if (cache_.has_value() && !request.bypass_cache) {
    cache_->put(digest, request, response);
  }
  return response;
}

BackendStats CachingBackend::stats() const {
  std::lock_guard lock(mutex_);
  return stats_;
}

LabelDistribution estimate_label_probs(ChatBackend& backend, ChatRequest request, int k) {
  if (k < 1) throw ConfigError("estimate_label_probs requires k >= 1");
  request.temperature = 1.0;
  request.bypass_cache = true;
  request.want_label_probs = false;

  std::size_t counts[3] = {0, 0, 0};
  for (int i = 0; i < k; ++i) {
    ChatResponse response = backend.complete(request);
    switch (parse_label(response.text)) {
      case Label::True: ++counts[0]; break;
      case Label::False: ++counts[1]; break;
      case Label::Unknown: ++counts[2]; break;
    }
  }
  LabelDistribution dist;
  dist.true_p = static_cast<double>(counts[0]) / k;
  dist.false_p = static_cast<double>(counts[1]) / k;
  dist.unknown_p = static_cast<double>(counts[2]) / k;
  return dist;
}

}  // namespace fnh
