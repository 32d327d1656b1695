#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace debate::text {

/// Splits on Unicode whitespace (UTF-8 input). Punctuation stays attached to
/// its token.
std::vector<std::string_view> split_words(std::string_view text);

std::size_t word_count(std::string_view text);

std::string_view trim(std::string_view text);

std::string to_lower_ascii(std::string_view text);

bool contains_icase(std::string_view haystack, std::string_view needle);

bool starts_with_icase(std::string_view text, std::string_view prefix);

/// Keeps the first `n` words of `text`, joined by single spaces.
std::string first_words(std::string_view text, std::size_t n);

std::string join(const std::vector<std::string>& parts, std::string_view sep);

std::vector<std::string> split_lines(std::string_view text);

/// Replaces every occurrence of `from` with `to`.
std::string replace_all(std::string text, std::string_view from, std::string_view to);

}  // namespace debate::text
