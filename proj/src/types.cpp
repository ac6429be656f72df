#include "fnh/types.hpp"

#include "fnh/errors.hpp"

namespace fnh {

std::string to_string(Label label) {
  switch (label) {
    case Label::True: return "True";
    case Label::False: return "False";
    case Label::Unknown: return "Unknown";
  }
  return "Unknown";
}

std::string to_string(PromptMode mode) {
  switch (mode) {
    case PromptMode::Original: return "original";
    case PromptMode::AllTrue: return "all_true";
    case PromptMode::AllFalse: return "all_false";
  }
  return "original";
}

std::string to_string(Role role) {
  switch (role) {
    case Role::System: return "system";
    case Role::User: return "user";
    case Role::Assistant: return "assistant";
  }
  return "user";
}

std::string to_string(SplitKind kind) {
  return kind == SplitKind::Parametric ? "parametric" : "counterfactual";
}

std::string to_string(ConfidenceSource source) {
  switch (source) {
    case ConfidenceSource::TokenProb: return "token_prob";
    case ConfidenceSource::Sampled: return "sampled";
    case ConfidenceSource::None: return "none";
  }
  return "none";
}

Label label_from_string(const std::string& text) {
  if (text == "True") return Label::True;
  if (text == "False") return Label::False;
  if (text == "Unknown") return Label::Unknown;
  throw ConfigError("unknown label: " + text);
}

PromptMode prompt_mode_from_string(const std::string& text) {
  if (text == "original") return PromptMode::Original;
  if (text == "all_true") return PromptMode::AllTrue;
  if (text == "all_false") return PromptMode::AllFalse;
  throw ConfigError("unknown prompt mode: " + text);
}

Role role_from_string(const std::string& text) {
  if (text == "system") return Role::System;
  if (text == "user") return Role::User;
  if (text == "assistant") return Role::Assistant;
  throw ConfigError("unknown role: " + text);
}

SplitKind split_kind_from_string(const std::string& text) {
  if (text == "parametric") return SplitKind::Parametric;
  if (text == "counterfactual") return SplitKind::Counterfactual;
  throw ConfigError("unknown split kind: " + text);
}

ConfidenceSource confidence_source_from_string(const std::string& text) {
  if (text == "token_prob") return ConfidenceSource::TokenProb;
  if (text == "sampled") return ConfidenceSource::Sampled;
  if (text == "none") return ConfidenceSource::None;
  throw ConfigError("unknown confidence source: " + text);
}

double LabelDistribution::at(Label label) const {
  switch (label) {
    case Label::True: return true_p;
    case Label::False: return false_p;
    case Label::Unknown: return unknown_p;
  }
  return 0.0;
}

}  // namespace fnh
