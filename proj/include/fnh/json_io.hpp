#pragma once

#include "json.hpp"

#include "fnh/types.hpp"

// nlohmann ADL serializers for the wire and cache formats.

namespace fnh {

inline void to_json(nlohmann::json& j, const Message& m) {
  j = nlohmann::json{{"role", to_string(m.role)}, {"content", m.content}};
}

inline void from_json(const nlohmann::json& j, Message& m) {
  m.role = role_from_string(j.at("role").get<std::string>());
  m.content = j.at("content").get<std::string>();
}

inline void to_json(nlohmann::json& j, const ChatRequest& r) {
  j = nlohmann::json{{"model", r.model},
                     {"messages", r.messages},
                     {"temperature", r.temperature},
                     {"want_label_probs", r.want_label_probs}};
}

inline void from_json(const nlohmann::json& j, ChatRequest& r) {
  r.model = j.at("model").get<std::string>();
  r.messages = j.at("messages").get<std::vector<Message>>();
  r.temperature = j.at("temperature").get<double>();
  r.want_label_probs = j.at("want_label_probs").get<bool>();
}

inline void to_json(nlohmann::json& j, const LabelProbs& p) {
  j = nlohmann::json{{"True", p.true_prob}, {"False", p.false_prob}};
}

inline void from_json(const nlohmann::json& j, LabelProbs& p) {
  p.true_prob = j.at("True").get<double>();
  p.false_prob = j.at("False").get<double>();
}

inline void to_json(nlohmann::json& j, const ChatResponse& r) {
  j = nlohmann::json{{"text", r.text}};
  if (r.label_probs.has_value()) {
    j["label_probs"] = *r.label_probs;
  } else {
    j["label_probs"] = nullptr;
  }
}

inline void from_json(const nlohmann::json& j, ChatResponse& r) {
  r.text = j.at("text").get<std::string>();
  if (j.contains("label_probs") && !j.at("label_probs").is_null()) {
    r.label_probs = j.at("label_probs").get<LabelProbs>();
  } else {
    r.label_probs.reset();
  }
  r.from_cache = false;
}

inline void to_json(nlohmann::json& j, const Prediction& p) {
  j = nlohmann::json{{"label", to_string(p.label)},
                     {"confidence_source", to_string(p.confidence_source)},
                     {"raw", p.raw}};
  if (p.confidence.has_value()) {
    j["confidence"] = *p.confidence;
  } else {
    j["confidence"] = nullptr;
  }
}

inline void from_json(const nlohmann::json& j, Prediction& p) {
  p.label = label_from_string(j.at("label").get<std::string>());
  p.confidence_source = confidence_source_from_string(j.at("confidence_source").get<std::string>());
  p.raw = j.at("raw").get<std::string>();
  if (j.contains("confidence") && !j.at("confidence").is_null()) {
    p.confidence = j.at("confidence").get<double>();
  } else {
    p.confidence.reset();
  }
}

inline void to_json(nlohmann::json& j, const Sample& s) {
  j = nlohmann::json{
      {"id", s.id}, {"question", s.question}, {"context", s.context}, {"answer", s.answer}};
}

inline void from_json(const nlohmann::json& j, Sample& s) {
  s.id = j.at("id").get<std::string>();
  s.question = j.at("question").get<std::string>();
  s.context = j.at("context").get<std::string>();
  s.answer = j.at("answer").get<bool>();
}

inline void to_json(nlohmann::json& j, const DialogTurn& t) {
  j = nlohmann::json{{"question", t.question}, {"answer", t.answer}};
}

inline void from_json(const nlohmann::json& j, DialogTurn& t) {
  t.question = j.at("question").get<std::string>();
  t.answer = j.at("answer").get<std::string>();
}

}  // namespace fnh
