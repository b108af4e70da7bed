#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace tempus::text {

// Half-open byte range [begin, end).
struct Span {
  std::size_t begin = 0;
  std::size_t end = 0;

  std::size_t size() const { return end - begin; }
  bool operator==(const Span&) const = default;
};

inline bool is_horizontal_space(char c) {
  return c == ' ' || c == '\t' || c == '\r' || c == '\v' || c == '\f';
}
inline bool is_space(char c) { return c == '\n' || is_horizontal_space(c); }
inline bool is_ascii_lower(char c) { return c >= 'a' && c <= 'z'; }
inline bool is_ascii_upper(char c) { return c >= 'A' && c <= 'Z'; }
inline bool is_ascii_digit(char c) { return c >= '0' && c <= '9'; }

// ASCII-only lowercasing; multi-byte UTF-8 sequences pass through unchanged.
std::string to_lower(std::string_view s);

// Byte length of the punctuation character starting at s[pos], or 0.
// Covers ASCII punctuation and common typographic marks (curly quotes,
// dashes, ellipsis, guillemets).
std::size_t punct_length_at(std::string_view s, std::size_t pos);
// Byte length of the punctuation character ending at s[end - 1], or 0.
std::size_t punct_length_before(std::string_view s, std::size_t end);

// Sub-range of `s` with leading and trailing punctuation removed.
Span strip_punct(std::string_view s);

std::string_view trim(std::string_view s);
std::string collapse_whitespace(std::string_view s);
std::vector<std::string_view> split_whitespace(std::string_view s);
std::string join(const std::vector<std::string>& parts, std::string_view sep);

std::size_t count_code_points(std::string_view s);

std::string sha256_hex(std::string_view data);

// Shortest decimal form that parses back to the same double.
std::string format_double(double v);

}  // namespace tempus::text
