#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>

namespace fnh {

// Hex-encoded SHA-256 of the input bytes.
std::string sha256_hex(std::string_view data);

// Deterministic 64-bit sub-seed derived from a master seed and a string key.
// Stable across platforms and runs, so parallel schedules cannot reorder
// per-sample randomness.
std::uint64_t stable_seed(std::uint64_t master, std::string_view key);

std::string_view trim(std::string_view text);
std::string to_lower(std::string_view text);

// Case-insensitive "haystack starts with needle".
bool starts_with_ci(std::string_view haystack, std::string_view needle);

std::string read_text_file(const std::filesystem::path& path);

// Writes to a temp file in the target directory, then renames into place.
void write_text_file_atomic(const std::filesystem::path& path, std::string_view content);

std::string iso8601_utc_now();

}  // namespace fnh
