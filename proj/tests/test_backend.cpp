#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <set>

#include "fnh/backend.hpp"
#include "fnh/errors.hpp"
#include "fnh/mock_backend.hpp"
#include "test_support.hpp"

using namespace fnh;

namespace {

ChatRequest base_request() {
  ChatRequest request;
  request.model = "m";
  request.messages = {{Role::User, "hello"}};
  request.temperature = 0.0;
  request.want_label_probs = false;
  request.stage = "evaluate";
  request.sample_id = "s1";
  return request;
}

}  // namespace

TEST_CASE("cache keys are injective over the hashed field set") {
  ChatRequest base = base_request();
  std::set<std::string> digests;
  digests.insert(cache_key("mock", base));

  ChatRequest model = base;
  model.model = "m2";
  digests.insert(cache_key("mock", model));

  ChatRequest content = base;
  content.messages[0].content = "hello!";
  digests.insert(cache_key("mock", content));

  ChatRequest role = base;
  role.messages[0].role = Role::System;
  digests.insert(cache_key("mock", role));

  ChatRequest extra = base;
  extra.messages.push_back({Role::Assistant, "hi"});
  digests.insert(cache_key("mock", extra));

  ChatRequest temp = base;
  temp.temperature = 1.0;
  digests.insert(cache_key("mock", temp));

  ChatRequest probs = base;
  probs.want_label_probs = true;
  digests.insert(cache_key("mock", probs));

  digests.insert(cache_key("http:x", base));

  CHECK(digests.size() == 8);
}

TEST_CASE("cache keys ignore routing annotations") {
  ChatRequest base = base_request();
  ChatRequest tagged = base;
  tagged.stage = "other";
  tagged.sample_id = "s2";
  tagged.bypass_cache = true;
  CHECK(cache_key("mock", base) == cache_key("mock", tagged));
}

TEST_CASE("equal requests always give equal keys") {
  ChatRequest a = base_request();
  ChatRequest b = base_request();
  CHECK(cache_key("mock", a) == cache_key("mock", b));
}

TEST_CASE("caching returns byte-identical text for repeated requests") {
  MockBackend mock(99);
  TranscriptEntry entry;
  entry.stage = "evaluate";
  entry.bernoulli_true = 0.5;  // would vary without the cache
  mock.add(entry);

  auto dir = test::temp_dir("cache");
  CachingBackend backend(mock, dir);

  ChatRequest request = base_request();
  ChatResponse first = backend.complete(request);
  ChatResponse second = backend.complete(request);

  CHECK(first.from_cache == false);
  CHECK(second.from_cache == true);
  CHECK(first.text == second.text);

  BackendStats stats = backend.stats();
  CHECK(stats.calls == 2);
  CHECK(stats.cache_hits == 1);
  CHECK(stats.upstream_calls == 1);
  CHECK(stats.per_sample_calls.at("s1") == 2);
  std::filesystem::remove_all(dir);
}

TEST_CASE("cache entries land under a two-hex-prefix directory") {
  MockBackend mock;
  TranscriptEntry entry;
  entry.reply_text = "True.";
  mock.add(entry);

  auto dir = test::temp_dir("cache");
  CachingBackend backend(mock, dir);
  ChatRequest request = base_request();
  backend.complete(request);

  std::string digest = cache_key("mock", request);
  std::filesystem::path expected = dir / digest.substr(0, 2) / (digest + ".json");
  CHECK(std::filesystem::exists(expected));
  std::filesystem::remove_all(dir);
}

TEST_CASE("label probabilities survive the cache round-trip") {
  class ProbBackend : public ChatBackend {
   public:
    ChatResponse complete(const ChatRequest&) override {
      ChatResponse response;
      response.text = "True";
      response.label_probs = LabelProbs{0.75, 0.25};
      return response;
    }
    std::string id() const override { return "prob"; }
  } inner;

  auto dir = test::temp_dir("cache");
  CachingBackend backend(inner, dir);
  ChatRequest request = base_request();
  backend.complete(request);
  ChatResponse cached = backend.complete(request);
  CHECK(cached.from_cache);
  REQUIRE(cached.label_probs.has_value());
  CHECK(cached.label_probs->true_prob == doctest::Approx(0.75));
  CHECK(cached.label_probs->false_prob == doctest::Approx(0.25));
  std::filesystem::remove_all(dir);
}

TEST_CASE("the mock replays scripted entries by stage and sample") {
  MockBackend mock;
  TranscriptEntry entry;
  entry.stage = "evaluate";
  entry.sample_id = "s1";
  entry.reply_text = "False. The statement contradicts the context.";
  mock.add(entry);

  ChatRequest request = base_request();
  CHECK(mock.complete(request).text == "False. The statement contradicts the context.");

  request.sample_id = "s2";
  CHECK_THROWS_WITH_AS(mock.complete(request), doctest::Contains("s2"), TranscriptError);
  CHECK_THROWS_WITH_AS(mock.complete(request), doctest::Contains("evaluate"), TranscriptError);
}

TEST_CASE("the first matching transcript entry wins") {
  MockBackend mock;
  TranscriptEntry specific;
  specific.stage = "evaluate";
  specific.sample_id = "s1";
  specific.reply_text = "specific";
  mock.add(specific);
  TranscriptEntry wildcard;
  wildcard.stage = "evaluate";
  wildcard.reply_text = "wildcard";
  mock.add(wildcard);

  ChatRequest request = base_request();
  CHECK(mock.complete(request).text == "specific");
  request.sample_id = "s9";
  CHECK(mock.complete(request).text == "wildcard");
}

TEST_CASE("index matchers script call sequences") {
  MockBackend mock;
  for (int i = 0; i < 3; ++i) {
    TranscriptEntry entry;
    entry.stage = "rewrite";
    entry.index = i;
    entry.reply_text = "rewrite " + std::to_string(i + 1);
    mock.add(entry);
  }

  ChatRequest request = base_request();
  request.stage = "rewrite";
  CHECK(mock.complete(request).text == "rewrite 1");
  CHECK(mock.complete(request).text == "rewrite 2");
  CHECK(mock.complete(request).text == "rewrite 3");
  CHECK_THROWS_AS(mock.complete(request), TranscriptError);
}

TEST_CASE("digest matchers pin exact requests") {
  ChatRequest request = base_request();
  MockBackend mock;
  TranscriptEntry entry;
  entry.digest = cache_key("mock", request);
  entry.reply_text = "pinned";
  mock.add(entry);

  CHECK(mock.complete(request).text == "pinned");
  request.messages[0].content = "changed";
  CHECK_THROWS_AS(mock.complete(request), TranscriptError);
}

TEST_CASE("degenerate bernoulli probabilities are constant") {
  MockBackend mock(1234);
  TranscriptEntry always;
  always.stage = "evaluate";
  always.bernoulli_true = 1.0;
  mock.add(always);

  ChatRequest request = base_request();
  for (int i = 0; i < 20; ++i) {
    CHECK(mock.complete(request).text == "True");
  }
}

TEST_CASE("seeded bernoulli draws converge to p") {
  MockBackend mock(42);
  TranscriptEntry entry;
  entry.stage = "evaluate";
  entry.bernoulli_true = 0.3;
  mock.add(entry);

  ChatRequest request = base_request();
  int trues = 0;
  for (int i = 0; i < 1000; ++i) {
    if (mock.complete(request).text == "True") ++trues;
  }
  double fraction = trues / 1000.0;
  CHECK(fraction > 0.25);
  CHECK(fraction < 0.35);
}

TEST_CASE("bernoulli draws are reproducible for a fixed seed") {
  auto run = [] {
    MockBackend mock(7);
    TranscriptEntry entry;
    entry.stage = "evaluate";
    entry.bernoulli_true = 0.5;
    mock.add(entry);
    ChatRequest request = base_request();
    std::string sequence;
    for (int i = 0; i < 64; ++i) sequence += mock.complete(request).text == "True" ? '1' : '0';
    return sequence;
  };
  CHECK(run() == run());
}

TEST_CASE("transcripts load from JSONL files") {
  auto backend = MockBackend::from_transcript(test::fixture("transcript24.jsonl"));
  ChatRequest request = base_request();
  request.stage = "evaluate";
  request.sample_id = "s01";
  CHECK(backend->complete(request).text == "True. Supported by the given context.");
  request.sample_id = "s23";
  CHECK(backend->complete(request).text == "There is no information related to the question.");
  request.stage = "subquestion";
  CHECK(backend->complete(request).text == "1. What is fact A?\n2. What is fact B?");
}

TEST_CASE("estimate_label_probs returns frequencies that sum to one") {
  MockBackend mock;
  TranscriptEntry entry;
  entry.stage = "evaluate";
  entry.reply_text = "True.";
  mock.add(entry);

  LabelDistribution dist = estimate_label_probs(mock, base_request(), 10);
  CHECK(dist.true_p == doctest::Approx(1.0));
  CHECK(dist.false_p == doctest::Approx(0.0));
  CHECK(dist.unknown_p == doctest::Approx(0.0));
  CHECK(dist.true_p + dist.false_p + dist.unknown_p == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("estimate_label_probs counts unknowns") {
  MockBackend mock;
  TranscriptEntry entry;
  entry.stage = "evaluate";
  entry.reply_text = "no committal words here";
  mock.add(entry);

  LabelDistribution dist = estimate_label_probs(mock, base_request(), 4);
  CHECK(dist.unknown_p == doctest::Approx(1.0));
}

TEST_CASE("estimate_label_probs approximates a bernoulli backend") {
  MockBackend mock(42);
  TranscriptEntry entry;
  entry.stage = "evaluate";
  entry.bernoulli_true = 0.5;
  mock.add(entry);

  LabelDistribution dist = estimate_label_probs(mock, base_request(), 1000);
  CHECK(dist.true_p > 0.45);
  CHECK(dist.true_p < 0.55);
  CHECK(dist.true_p + dist.false_p + dist.unknown_p == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("estimate_label_probs bypasses the cache") {
  MockBackend mock(11);
  TranscriptEntry entry;
  entry.stage = "evaluate";
  entry.bernoulli_true = 0.5;
  mock.add(entry);

  auto dir = test::temp_dir("cache");
  CachingBackend backend(mock, dir);
  estimate_label_probs(backend, base_request(), 50);

  BackendStats stats = backend.stats();
  CHECK(stats.calls == 50);
  CHECK(stats.cache_hits == 0);
  CHECK(stats.upstream_calls == 50);
  std::filesystem::remove_all(dir);
}

TEST_CASE("estimate_label_probs validates k") {
  MockBackend mock;
  CHECK_THROWS_AS(estimate_label_probs(mock, base_request(), 0), ConfigError);
}
