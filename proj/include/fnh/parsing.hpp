#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "fnh/types.hpp"

namespace fnh {

// Scans case-insensitively for the standalone words "true" and "false"
// (word-boundary match, so "untrue" does not count) and returns the label of
// the earliest occurrence. Unknown iff neither word occurs.
Label parse_label(std::string_view raw);

// True iff raw is empty/whitespace or starts (case-insensitively, after
// leading whitespace) with one of the literal patterns.
bool is_null_response(std::string_view raw, const std::vector<std::string>& patterns);
bool is_null_response(std::string_view raw);

const std::vector<std::string>& default_null_patterns();

// Plain-text pattern file, one literal prefix per line; blank lines skipped.
std::vector<std::string> load_null_patterns(const std::filesystem::path& path);

std::string null_patterns_digest(const std::vector<std::string>& patterns);

// Splits on lines whose first non-blank token is an integer followed by "."
// or ")". The marker is stripped; continuation lines attach to the current
// item; text before the first marker is ignored. Items are trimmed and empty
// items dropped.
std::vector<std::string> parse_numbered_list(std::string_view raw);

// Builds a Prediction for a parsed label. Token probabilities win when the
// response carries them (renormalized over {True, False}); otherwise the
// sampled fallback distribution; otherwise no confidence. Unknown labels
// never receive token-probability confidence.
Prediction attach_confidence(Label label, const ChatResponse& response,
                             const std::optional<LabelDistribution>& sampled = std::nullopt);

}  // namespace fnh
