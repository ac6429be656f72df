#pragma once

#include <string>
#include <vector>

#include "fnh/backend.hpp"
#include "fnh/parsing.hpp"
#include "fnh/types.hpp"

namespace fnh {

// Shared knobs for the rewriting pipelines.
struct PipelineOptions {
  std::string model;
  std::vector<std::string> null_patterns = default_null_patterns();
  // Ask the backend for first-token label probabilities on final evaluations.
  bool want_label_probs = false;
};

// Forwards to an inner backend while recording the digest of every request,
// so traces can carry an audit trail of the exact calls they made.
class DigestRecordingBackend : public ChatBackend {
 public:
  DigestRecordingBackend(ChatBackend& inner, std::vector<std::string>& digests)
      : inner_(inner), digests_(digests) {}

  ChatResponse complete(const ChatRequest& request) override {
    digests_.push_back(cache_key(inner_.id(), request));
    return inner_.complete(request);
  }

  std::string id() const override { return inner_.id(); }

 private:
  ChatBackend& inner_;
  std::vector<std::string>& digests_;
};

}  // namespace fnh
