#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace astra::util {

std::string_view trim(std::string_view s);
std::string to_lower_ascii(std::string_view s);
bool is_blank(std::string_view s);

/// Splits on '\n'. A trailing newline does not produce an empty last line.
std::vector<std::string> split_lines(std::string_view text);
std::string join(const std::vector<std::string>& parts, std::string_view sep);

/// Drops leading and trailing lines that are empty or whitespace-only.
std::string trim_blank_lines(std::string_view text);

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view content);

/// Lowercase hex SHA-256 of `data`.
std::string sha256_hex(std::string_view data);

/// printf-style "%.{digits}f".
std::string fixed(double value, int digits);

/// Number of Unicode code points in a UTF-8 string.
std::size_t display_width(std::string_view s);

bool is_identifier_char(char c);

/// Whole-word, case-sensitive search; word characters are [A-Za-z0-9_].
bool contains_word(std::string_view haystack, std::string_view word);

}  // namespace astra::util
