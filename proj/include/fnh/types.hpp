#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace fnh {

// Verdict extracted from a completion. Unknown means neither label token
// occurred as a standalone word.
enum class Label { True, False, Unknown };

enum class PromptMode { Original, AllTrue, AllFalse };

enum class Role { System, User, Assistant };

// parametric: the closed-book answer matches the correct answer of the
// closed-book query; counterfactual: it differs (Unknown counts as differing).
enum class SplitKind { Parametric, Counterfactual };

enum class ConfidenceSource { TokenProb, Sampled, None };

std::string to_string(Label label);
std::string to_string(PromptMode mode);
std::string to_string(Role role);
std::string to_string(SplitKind kind);
std::string to_string(ConfidenceSource source);

Label label_from_string(const std::string& text);
PromptMode prompt_mode_from_string(const std::string& text);
Role role_from_string(const std::string& text);
SplitKind split_kind_from_string(const std::string& text);
ConfidenceSource confidence_source_from_string(const std::string& text);

struct Message {
  Role role = Role::User;
  std::string content;

  bool operator==(const Message&) const = default;
};

struct ChatRequest {
  std::string model;
  std::vector<Message> messages;
  double temperature = 0.0;
  bool want_label_probs = false;

  // Routing annotations. Not part of the cache identity; used by the mock
  // transcript matcher and per-sample accounting.
  std::string stage;
  std::string sample_id;
  bool bypass_cache = false;
};

// Raw probabilities of the first answer token being "True"/"False".
// Renormalized over the pair when attached to a prediction.
struct LabelProbs {
  double true_prob = 0.0;
  double false_prob = 0.0;

  bool operator==(const LabelProbs&) const = default;
};

struct ChatResponse {
  std::string text;
  std::optional<LabelProbs> label_probs;
  bool from_cache = false;
};

struct Prediction {
  Label label = Label::Unknown;
  std::optional<double> confidence;
  ConfidenceSource confidence_source = ConfidenceSource::None;
  std::string raw;

  bool operator==(const Prediction&) const = default;
};

// Label frequencies over k sampled completions; sums to 1.
struct LabelDistribution {
  double true_p = 0.0;
  double false_p = 0.0;
  double unknown_p = 0.0;

  double at(Label label) const;
};

// One yes/no QA item: question q, supporting context c, ground truth a.
struct Sample {
  std::string id;
  std::string question;
  std::string context;
  bool answer = false;

  bool operator==(const Sample&) const = default;
};

// One (question, answer) pair of the refinement conversation.
// Histories are ordered newest rewrite first: (q_n, a_n), (q_{n-1}, a_{n-1}), ...
struct DialogTurn {
  std::string question;
  std::string answer;

  bool operator==(const DialogTurn&) const = default;
};

using DialogHistory = std::vector<DialogTurn>;

// Knowledge-conflict annotation for one sample, as persisted in a splits file.
struct SplitLabel {
  std::string sample_id;
  SplitKind label = SplitKind::Counterfactual;
  Label closed_book_label = Label::Unknown;
  std::string closed_book_raw;

  bool operator==(const SplitLabel&) const = default;
};

}  // namespace fnh
