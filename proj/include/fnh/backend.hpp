#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <mutex>
#include <optional>
#include <string>

#include "fnh/types.hpp"

namespace fnh {

class ChatBackend {
 public:
  virtual ~ChatBackend() = default;

  virtual ChatResponse complete(const ChatRequest& request) = 0;

  // Stable identifier mixed into cache keys so responses from different
  // backends never alias.
  virtual std::string id() const = 0;
};

// Hex digest over (backend id, model, messages, temperature, want_label_probs).
// Routing annotations are deliberately excluded.
std::string cache_key(const std::string& backend_id, const ChatRequest& request);

// Content-addressed store, one file per digest:
// <root>/<2-hex-prefix>/<digest>.json holding {request, response, timestamp}.
// Writes go to a temp file and are renamed into place, so concurrent writers
// of the same key are safe (last rename wins on identical content).
class ResponseCache {
 public:
  explicit ResponseCache(std::filesystem::path root);

  std::optional<ChatResponse> get(const std::string& digest) const;
  void put(const std::string& digest, const ChatRequest& request,
           const ChatResponse& response) const;

  const std::filesystem::path& root() const { return root_; }

 private:
  std::filesystem::path entry_path(const std::string& digest) const;

  std::filesystem::path root_;
};

struct BackendStats {
  std::uint64_t calls = 0;           // complete() invocations, cache hits included
  std::uint64_t cache_hits = 0;
  std::uint64_t upstream_calls = 0;  // requests that reached the inner backend
  std::map<std::string, std::uint64_t> per_sample_calls;
};

// Cache-and-count decorator. Without a cache directory it only counts.
// Requests flagged bypass_cache skip both lookup and store, so repeated
// sampling draws stay independent.
class CachingBackend : public ChatBackend {
 public:
  CachingBackend(ChatBackend& inner, const std::optional<std::filesystem::path>& cache_dir);

  ChatResponse complete(const ChatRequest& request) override;
  std::string id() const override { return inner_.id(); }

  BackendStats stats() const;

 private:
  ChatBackend& inner_;
  std::optional<ResponseCache> cache_;
  mutable std::mutex mutex_;
  BackendStats stats_;
};

// Issues k completions of the request at temperature 1.0 with the cache
// bypassed, parses each, and returns label frequencies (sum exactly 1).
LabelDistribution estimate_label_probs(ChatBackend& backend, ChatRequest request, int k);

}  // namespace fnh
