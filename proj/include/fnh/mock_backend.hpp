#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "fnh/backend.hpp"

namespace fnh {

// One transcript rule. A request matches when every set field agrees:
//   digest     literal request digest (cache_key of the incoming request)
//   stage      request stage tag; unset = any stage
//   sample_id  request sample id; unset = any sample
//   index      k-th call (0-based) seen for this (stage, sample_id) pair,
//              for scripting multi-step sequences such as rewrite chains
// Exactly one of reply_text / bernoulli_true supplies the response.
struct TranscriptEntry {
  std::optional<std::string> digest;
  std::optional<std::string> stage;
  std::optional<std::string> sample_id;
  std::optional<int> index;
  std::optional<std::string> reply_text;
  std::optional<double> bernoulli_true;
};

// Deterministic scripted backend. The first matching entry answers; an
// unmatched request raises TranscriptError naming the request's stage tag
// and sample id — the mock never fabricates text.
//
// Bernoulli entries answer "True" with probability p. Each draw is a pure
// hash of (seed, entry, request digest, per-(stage, sample) call ordinal):
// repeated identical requests get fresh draws, byte-identical requests from
// different samples get the same draw, and parallel schedules cannot
// reorder anything.
class MockBackend : public ChatBackend {
 public:
  explicit MockBackend(std::uint64_t seed = 0);

  // Transcript file: JSONL of
  //   {"match": {"stage": ..., "sample_id": ..., "index": ...} | {"digest": ...},
  //    "reply": "text" | {"bernoulli_true": p}}
  static std::unique_ptr<MockBackend> from_transcript(const std::filesystem::path& path,
                                                      std::uint64_t seed = 0);

  void add(TranscriptEntry entry);

  ChatResponse complete(const ChatRequest& request) override;
  std::string id() const override { return "mock"; }

 private:
  std::uint64_t seed_;
  std::vector<TranscriptEntry> entries_;
  mutable std::mutex mutex_;
  std::map<std::pair<std::string, std::string>, int> call_counts_;
};

}  // namespace fnh
