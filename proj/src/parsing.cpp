#include "fnh/parsing.hpp"

#include <cctype>
#include <fstream>
#include <sstream>

#include "fnh/errors.hpp"
#include "fnh/util.hpp"

namespace fnh {

namespace {

bool is_word_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
}

// Earliest word-boundary, case-insensitive occurrence of `word`, or npos.
std::size_t find_word(std::string_view haystack, std::string_view word) {
  if (word.empty() || haystack.size() < word.size()) return std::string_view::npos;
  for (std::size_t i = 0; i + word.size() <= haystack.size(); ++i) {
    bool hit = true;
    for (std::size_t j = 0; j < word.size(); ++j) {
      if (std::tolower(static_cast<unsigned char>(haystack[i + j])) !=
          std::tolower(static_cast<unsigned char>(word[j]))) {
        hit = false;
        break;
      }
    }
    if (!hit) continue;
    if (i > 0 && is_word_char(haystack[i - 1])) continue;
    std::size_t after = i + word.size();
    if (after < haystack.size() && is_word_char(haystack[after])) continue;
    return i;
  }
  return std::string_view::npos;
}

}  // namespace

Label parse_label(std::string_view raw) {
  std::size_t true_pos = find_word(raw, "true");
  std::size_t false_pos = find_word(raw, "false");
  if (true_pos == std::string_view::npos && false_pos == std::string_view::npos) {
    return Label::Unknown;
  }
  return true_pos < false_pos ? Label::True : Label::False;
}

bool is_null_response(std::string_view raw, const std::vector<std::string>& patterns) {
  std::string_view body = trim(raw);
  if (body.empty()) return true;
  for (const std::string& pattern : patterns) {
    if (!pattern.empty() && starts_with_ci(body, pattern)) return true;
  }
  return false;
}

bool is_null_response(std::string_view raw) {
  return is_null_response(raw, default_null_patterns());
}

const std::vector<std::string>& default_null_patterns() {
  static const std::vector<std::string> patterns = {
      "There is no information related to the question.",
      "There is no information",
  };
  return patterns;
}

std::vector<std::string> load_null_patterns(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open null-pattern file: " + path.string());
  std::vector<std::string> patterns;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (trim(line).empty()) continue;
    patterns.push_back(line);
  }
  return patterns;
}

std::string null_patterns_digest(const std::vector<std::string>& patterns) {
  std::string joined;
  for (const std::string& p : patterns) {
    joined += p;
    joined += '\n';
  }
  return sha256_hex(joined);
}

std::vector<std::string> parse_numbered_list(std::string_view raw) {
  std::vector<std::string> items;
  std::string current;
  bool in_item = false;

  std::size_t start = 0;
  while (start <= raw.size()) {
    std::size_t end = raw.find('\n', start);
    std::string_view line = raw.substr(
        start, end == std::string_view::npos ? std::string_view::npos : end - start);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);

    std::string_view body = line;
    std::size_t i = 0;
    while (i < body.size() && std::isspace(static_cast<unsigned char>(body[i]))) ++i;
    std::size_t digits = i;
    while (digits < body.size() && std::isdigit(static_cast<unsigned char>(body[digits]))) ++digits;
    bool marker = digits > i && digits < body.size() && (body[digits] == '.' || body[digits] == ')');

    if (marker) {
      if (in_item) {
        std::string item(trim(current));
        if (!item.empty()) items.push_back(std::move(item));
      }
      current.assign(body.substr(digits + 1));
      in_item = true;
    } else if (in_item) {
      current += '\n';
      current.append(line);
    }

    if (end == std::string_view::npos) break;
    start = end + 1;
  }
  if (in_item) {
    std::string item(trim(current));
    if (!item.empty()) items.push_back(std::move(item));
  }
  return items;
}

Prediction attach_confidence(Label label, const ChatResponse& response,
                             const std::optional<LabelDistribution>& sampled) {
  Prediction prediction;
  prediction.label = label;
  prediction.raw = response.text;

  if (label != Label::Unknown && response.label_probs.has_value()) {
    double p_true = response.label_probs->true_prob;
    double p_false = response.label_probs->false_prob;
    double norm = p_true + p_false;
    if (norm > 0.0) {
      prediction.confidence = (label == Label::True ? p_true : p_false) / norm;
      prediction.confidence_source = ConfidenceSource::TokenProb;
      return prediction;
    }
  }
  if (sampled.has_value()) {
    prediction.confidence = sampled->at(label);
    prediction.confidence_source = ConfidenceSource::Sampled;
    return prediction;
  }
  return prediction;
}

}  // namespace fnh
