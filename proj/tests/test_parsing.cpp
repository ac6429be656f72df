#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <fstream>
#include <random>
#include <regex>

#include "fnh/parsing.hpp"
#include "fnh/util.hpp"
#include "test_support.hpp"

using namespace fnh;

namespace {

// Independent oracle: earliest case-insensitive \b-delimited occurrence.
Label regex_oracle(const std::string& raw) {
  static const std::regex true_re(R"(\btrue\b)", std::regex::icase);
  static const std::regex false_re(R"(\bfalse\b)", std::regex::icase);
  std::smatch true_match;
  std::smatch false_match;
  bool has_true = std::regex_search(raw, true_match, true_re);
  bool has_false = std::regex_search(raw, false_match, false_re);
  if (!has_true && !has_false) return Label::Unknown;
  if (has_true && !has_false) return Label::True;
  if (!has_true) return Label::False;
  return true_match.position(0) < false_match.position(0) ? Label::True : Label::False;
}

}  // namespace

TEST_CASE("parse_label handles representative completions") {
  CHECK(parse_label("False. A computer can indeed be programmed using Boolean algebra.") ==
        Label::False);
  CHECK(parse_label("There is no information related to the question.") == Label::Unknown);
  CHECK(parse_label("It is true that X, not false.") == Label::True);
  CHECK(parse_label("TRUE!") == Label::True);
  CHECK(parse_label("untrue statements abound") == Label::Unknown);
  CHECK(parse_label("the falsehood persists") == Label::Unknown);
  CHECK(parse_label("true123") == Label::Unknown);
  CHECK(parse_label("(false)") == Label::False);
  CHECK(parse_label("") == Label::Unknown);
}

TEST_CASE("parse_label is insensitive to case changes") {
  for (const char* raw : {"False. Because reasons.", "Answer: TRUE", "it's True, not False"}) {
    CHECK(parse_label(raw) == parse_label(to_lower(raw)));
  }
}

TEST_CASE("parse_label agrees with a regex oracle on generated strings") {
  const std::vector<std::string> vocab = {
      "true",  "false",  "True",    "FALSE",   "untrue", "falsehood", "truth",
      "truly", "TRUE.",  "(false)", "true-ish", "yes",    "no",        "answer",
      "is",    "the",    "maybe",   "1.",      "true123", "_true",     "False,"};
  std::mt19937 rng(20240917);
  std::uniform_int_distribution<std::size_t> pick(0, vocab.size() - 1);
  std::uniform_int_distribution<int> length(0, 12);

  for (int i = 0; i < 1000; ++i) {
    std::string raw;
    int words = length(rng);
    for (int w = 0; w < words; ++w) {
      if (!raw.empty()) raw += ' ';
      raw += vocab[pick(rng)];
    }
    CAPTURE(raw);
    CHECK(parse_label(raw) == regex_oracle(raw));
  }
}

TEST_CASE("is_null_response matches the default pattern list") {
  CHECK(is_null_response("There is no information related to the question."));
  CHECK(is_null_response("There is no information about this."));
  CHECK(is_null_response("   "));
  CHECK(is_null_response(""));
  CHECK_FALSE(is_null_response("1. Fact one."));
  CHECK_FALSE(is_null_response("False. No supporting fact."));
}

TEST_CASE("is_null_response uses configured literal prefixes") {
  std::vector<std::string> patterns = {"I cannot answer"};
  CHECK(is_null_response("I cannot answer that.", patterns));
  CHECK(is_null_response("  i CANNOT answer anything", patterns));
  CHECK_FALSE(is_null_response("There is no information", patterns));
}

TEST_CASE("null patterns load from a plain-text file") {
  auto dir = test::temp_dir("null-patterns");
  auto path = dir / "patterns.txt";
  {
    std::ofstream out(path);
    out << "I cannot answer\n\nNo relevant facts\n";
  }
  auto patterns = load_null_patterns(path);
  REQUIRE(patterns.size() == 2);
  CHECK(patterns[0] == "I cannot answer");
  CHECK(patterns[1] == "No relevant facts");
  CHECK(null_patterns_digest(patterns).size() == 64);
  std::filesystem::remove_all(dir);
}

TEST_CASE("parse_numbered_list splits on numeric markers") {
  CHECK(parse_numbered_list("1. A\n2. B") == std::vector<std::string>{"A", "B"});
  CHECK(parse_numbered_list("Here are facts:\n1) A") == std::vector<std::string>{"A"});
  CHECK(parse_numbered_list("") == std::vector<std::string>{});
  CHECK(parse_numbered_list("no markers at all") == std::vector<std::string>{});
  CHECK(parse_numbered_list("1. A\ncontinued line\n2. B") ==
        std::vector<std::string>{"A\ncontinued line", "B"});
  CHECK(parse_numbered_list("10. tenth\n11) eleventh") ==
        std::vector<std::string>{"tenth", "eleventh"});
  CHECK(parse_numbered_list("  3.   padded   ") == std::vector<std::string>{"padded"});
}

TEST_CASE("parse_numbered_list never returns empty items") {
  for (const char* raw : {"1.\n2. B", "1. \n2.  \n3. C", "1.", "preamble\n1.\n"}) {
    for (const std::string& item : parse_numbered_list(raw)) {
      CHECK_FALSE(item.empty());
    }
  }
}

TEST_CASE("attach_confidence prefers token probabilities") {
  ChatResponse response;
  response.text = "True, clearly.";
  response.label_probs = LabelProbs{0.9, 0.1};

  Prediction prediction = attach_confidence(Label::True, response);
  REQUIRE(prediction.confidence.has_value());
  CHECK(*prediction.confidence == doctest::Approx(0.9));
  CHECK(prediction.confidence_source == ConfidenceSource::TokenProb);
  CHECK(prediction.raw == "True, clearly.");

  response.label_probs = LabelProbs{0.4, 0.4};
  prediction = attach_confidence(Label::True, response);
  CHECK(*prediction.confidence == doctest::Approx(0.5));
}

TEST_CASE("attach_confidence falls back to the sampled distribution") {
  ChatResponse response;
  response.text = "True";

  LabelDistribution sampled;
  sampled.true_p = 0.7;
  sampled.false_p = 0.2;
  sampled.unknown_p = 0.1;

  Prediction prediction = attach_confidence(Label::True, response, sampled);
  REQUIRE(prediction.confidence.has_value());
  CHECK(*prediction.confidence == doctest::Approx(0.7));
  CHECK(prediction.confidence_source == ConfidenceSource::Sampled);

  prediction = attach_confidence(Label::True, response);
  CHECK_FALSE(prediction.confidence.has_value());
  CHECK(prediction.confidence_source == ConfidenceSource::None);
}

TEST_CASE("attach_confidence never gives Unknown token-probability confidence") {
  ChatResponse response;
  response.text = "no label here";
  response.label_probs = LabelProbs{0.6, 0.4};

  Prediction prediction = attach_confidence(Label::Unknown, response);
  CHECK(prediction.confidence_source != ConfidenceSource::TokenProb);
  CHECK_FALSE(prediction.confidence.has_value());

  LabelDistribution sampled;
  sampled.unknown_p = 1.0;
  prediction = attach_confidence(Label::Unknown, response, sampled);
  CHECK(prediction.confidence_source == ConfidenceSource::Sampled);
  CHECK(*prediction.confidence == doctest::Approx(1.0));
}

TEST_CASE("attach_confidence stays within [0,1] on random inputs") {
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int i = 0; i < 200; ++i) {
    ChatResponse response;
    response.text = i % 2 == 0 ? "True" : "False";
    if (i % 3 != 0) response.label_probs = LabelProbs{unit(rng), unit(rng)};
    std::optional<LabelDistribution> sampled;
    if (i % 5 != 0) {
      LabelDistribution dist;
      dist.true_p = unit(rng);
      dist.false_p = unit(rng);
      sampled = dist;
    }
    Label label = i % 2 == 0 ? Label::True : Label::False;
    Prediction prediction = attach_confidence(label, response, sampled);
    if (prediction.confidence.has_value()) {
      CHECK(*prediction.confidence >= 0.0);
      CHECK(*prediction.confidence <= 1.0);
    }
  }
}

TEST_CASE("attach_confidence skips degenerate zero probabilities") {
  ChatResponse response;
  response.text = "True";
  response.label_probs = LabelProbs{0.0, 0.0};
  Prediction prediction = attach_confidence(Label::True, response);
  CHECK_FALSE(prediction.confidence.has_value());
  CHECK(prediction.confidence_source == ConfidenceSource::None);
}
