// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace madacc {

// Byte offset of each codepoint in a UTF-8 string, with a trailing sentinel
// equal to text.size(). Invalid bytes count as one codepoint each.
std::vector<std::size_t> codepoint_offsets(std::string_view text);

std::size_t codepoint_length(std::string_view text);

// Slice by codepoint indices, end exclusive. Indices must be within range.
std::string slice_codepoints(std::string_view text, std::size_t start, std::size_t end);

// Runs of whitespace become a single space; leading/trailing whitespace dropped.
std::string collapse_whitespace(std::string_view text);

std::string to_lower(std::string_view text);
std::string trim(std::string_view text);

// Case-insensitive substring test (ASCII folding only).
bool contains_ci(std::string_view haystack, std::string_view needle);

std::vector<std::string> split_lines(std::string_view text);

std::string replace_all(std::string text, std::string_view from, std::string_view to);

std::uint64_t fnv1a64(std::string_view data, std::uint64_t seed = 14695981039346656037ull);

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, std::string_view content);

}  // namespace madacc
