#include "tempus/text.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <openssl/evp.h>

#include "tempus/error.hpp"

namespace tempus::text {

namespace {

constexpr std::array<std::string_view, 11> kUnicodePunct = {
    "‘", "’", "“", "”", "–", "—",
    "…", "«", "»", "¿", "¡",
};

bool is_ascii_punct(char c) {
  const auto u = static_cast<unsigned char>(c);
  return (u >= 33 && u <= 47) || (u >= 58 && u <= 64) || (u >= 91 && u <= 96) ||
         (u >= 123 && u <= 126);
}

}  // namespace

std::string to_lower(std::string_view s) {
  std::string out(s);
  for (char& c : out) {
    if (is_ascii_upper(c)) c = static_cast<char>(c - 'A' + 'a');
  }
  return out;
}

std::size_t punct_length_at(std::string_view s, std::size_t pos) {
  if (pos >= s.size()) return 0;
  if (is_ascii_punct(s[pos])) return 1;
  for (auto p : kUnicodePunct) {
    if (s.substr(pos, p.size()) == p) return p.size();
  }
  return 0;
}

std::size_t punct_length_before(std::string_view s, std::size_t end) {
  if (end == 0 || end > s.size()) return 0;
  if (is_ascii_punct(s[end - 1])) return 1;
  for (auto p : kUnicodePunct) {
    if (end >= p.size() && s.substr(end - p.size(), p.size()) == p) return p.size();
  }
  return 0;
}

Span strip_punct(std::string_view s) {
  Span span{0, s.size()};
  while (span.begin < span.end) {
    const auto n = punct_length_at(s, span.begin);
    if (n == 0) break;
    span.begin += n;
  }
  while (span.end > span.begin) {
    const auto n = punct_length_before(s, span.end);
    if (n == 0 || span.end - n < span.begin) break;
    span.end -= n;
  }
  return span;
}

std::string_view trim(std::string_view s) {
  std::size_t b = 0;
  std::size_t e = s.size();
  while (b < e && is_space(s[b])) ++b;
  while (e > b && is_space(s[e - 1])) --e;
  return s.substr(b, e - b);
}

std::string collapse_whitespace(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  bool pending = false;
  for (char c : trim(s)) {
    if (is_space(c)) {
      pending = true;
      continue;
    }
    if (pending) out.push_back(' ');
    pending = false;
    out.push_back(c);
  }
  return out;
}

std::vector<std::string_view> split_whitespace(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && is_space(s[i])) ++i;
    const std::size_t start = i;
    while (i < s.size() && !is_space(s[i])) ++i;
    if (i > start) out.push_back(s.substr(start, i - start));
  }
  return out;
}

std::string join(const std::vector<std::string>& parts, std::string_view sep) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) out.append(sep);
    out.append(parts[i]);
  }
  return out;
}

std::size_t count_code_points(std::string_view s) {
  std::size_t n = 0;
  for (char c : s) {
    if ((static_cast<unsigned char>(c) & 0xC0) != 0x80) ++n;
  }
  return n;
}

std::string sha256_hex(std::string_view data) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), digest, &len, EVP_sha256(), nullptr) != 1) {
    fail(ErrorKind::Io, "sha256 digest failed");
  }
  static constexpr char hex[] = "0123456789abcdef";
  std::string out;
  out.reserve(len * 2);
  for (unsigned int i = 0; i < len; ++i) {
    out.push_back(hex[digest[i] >> 4]);
    out.push_back(hex[digest[i] & 0xF]);
  }
  return out;
}

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

}  // namespace tempus::text
