#include "fnh/mock_backend.hpp"

#include <fstream>
#include <sstream>

#include "json.hpp"

#include "fnh/errors.hpp"
#include "fnh/util.hpp"

namespace fnh {

namespace {
using nlohmann::json;
}

MockBackend::MockBackend(std::uint64_t seed) : seed_(seed) {}

std::unique_ptr<MockBackend> MockBackend::from_transcript(const std::filesystem::path& path,
                                                          std::uint64_t seed) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open transcript: " + path.string());

  auto backend = std::make_unique<MockBackend>(seed);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    json record;
    try {
      record = json::parse(line);
    } catch (const json::exception& ex) {
      throw ConfigError("transcript line " + std::to_string(line_no) + ": " + ex.what());
    }

    TranscriptEntry entry;
    const json& match = record.at("match");
    if (match.contains("digest")) entry.digest = match.at("digest").get<std::string>();
    if (match.contains("stage")) entry.stage = match.at("stage").get<std::string>();
    if (match.contains("sample_id")) entry.sample_id = match.at("sample_id").get<std::string>();
    if (match.contains("index")) entry.index = match.at("index").get<int>();

    const json& reply = record.at("reply");
    if (reply.is_string()) {
      entry.reply_text = reply.get<std::string>();
    } else if (reply.is_object() && reply.contains("bernoulli_true")) {
      entry.bernoulli_true = reply.at("bernoulli_true").get<double>();
    } else {
      throw ConfigError("transcript line " + std::to_string(line_no) +
                        ": reply must be text or {\"bernoulli_true\": p}");
    }
    backend->add(std::move(entry));
  }
  return backend;
}

void MockBackend::add(TranscriptEntry entry) {
  if (entry.bernoulli_true.has_value() &&
      (*entry.bernoulli_true < 0.0 || *entry.bernoulli_true > 1.0)) {
    throw ConfigError("bernoulli_true must lie in [0,1]");
  }
  entries_.push_back(std::move(entry));
}

ChatResponse MockBackend::complete(const ChatRequest& request) {
  std::lock_guard lock(mutex_);

  int ordinal = call_counts_[{request.stage, request.sample_id}]++;

  std::string digest;  // computed lazily; most transcripts match by stage/sample
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    const TranscriptEntry& entry = entries_[i];
    if (entry.stage.has_value() && *entry.stage != request.stage) continue;
    if (entry.sample_id.has_value() && *entry.sample_id != request.sample_id) continue;
    if (entry.index.has_value() && *entry.index != ordinal) continue;
    if (entry.digest.has_value()) {
      if (digest.empty()) digest = cache_key(id(), request);
      if (*entry.digest != digest) continue;
    }

    ChatResponse response;
    if (entry.reply_text.has_value()) {
      response.text = *entry.reply_text;
    } else {
      if (digest.empty()) digest = cache_key(id(), request);
      std::uint64_t word = stable_seed(seed_ + 0x9e3779b97f4a7c15ull * (i + 1),
                                       digest + "#" + std::to_string(ordinal));
      double uniform = static_cast<double>(word >> 11) * 0x1.0p-53;
      response.text = uniform < *entry.bernoulli_true ? "True" : "False";
    }
    return response;
  }

  throw TranscriptError("no transcript entry matches request (stage=\"" + request.stage +
                        "\", sample_id=\"" + request.sample_id + "\")");
}

}  // namespace fnh
