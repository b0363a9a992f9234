#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace matmcd::text {

std::string to_lower(std::string_view s);
std::string trim(std::string_view s);
/// Collapses every run of whitespace into one space and trims both ends.
std::string collapse_whitespace(std::string_view s);
std::vector<std::string> split_lines(std::string_view s);
std::string join(const std::vector<std::string>& parts, std::string_view sep);
bool starts_with_ci(std::string_view s, std::string_view prefix);
/// Case-insensitive substring search; returns npos when absent.
std::size_t find_ci(std::string_view haystack, std::string_view needle, std::size_t from = 0);
/// Lowercase alphanumeric tokens, in order of appearance.
std::vector<std::string> tokenize_words(std::string_view s);
/// Shortest decimal text that keeps at least one fractional digit ("2.0", "0.25").
std::string format_decimal(double value, int max_decimals = 4);

}  // namespace matmcd::text
