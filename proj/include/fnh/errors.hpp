#pragma once

#include <stdexcept>
#include <string>

namespace fnh {

class FnhError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Bad CLI flags, unreadable config, inconsistent options. Exit code 2.
class ConfigError : public FnhError {
 public:
  using FnhError::FnhError;
};

// Malformed dataset or splits file.
class CorpusError : public FnhError {
 public:
  using FnhError::FnhError;
};

// Transport or protocol failure talking to a backend. Exit code 3 when
// transport retries were exhausted.
class BackendError : public FnhError {
 public:
  BackendError(const std::string& message, int attempts = 0, bool transport = false)
      : FnhError(message), attempts_(attempts), transport_(transport) {}

  int attempts() const { return attempts_; }
  bool transport() const { return transport_; }

 private:
  int attempts_;
  bool transport_;
};

// Mock transcript could not answer a request.
class TranscriptError : public FnhError {
 public:
  using FnhError::FnhError;
};

// A pipeline stage failed; carries the stage tag and the step index.
class PipelineError : public FnhError {
 public:
  PipelineError(std::string stage, int index, const std::string& detail)
      : FnhError(stage + (index >= 0 ? "[" + std::to_string(index) + "]" : "") + ": " + detail),
        stage_(std::move(stage)),
        index_(index) {}

  const std::string& stage() const { return stage_; }
  int index() const { return index_; }

 private:
  std::string stage_;
  int index_;
};

// Undefined ratio (zero denominator) or missing split label.
class MetricsError : public FnhError {
 public:
  using FnhError::FnhError;
};

}  // namespace fnh
