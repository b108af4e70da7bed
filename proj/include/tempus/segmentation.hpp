#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "tempus/text.hpp"

namespace tempus::seg {

struct Sentence {
  std::string source_id;
  std::size_t index = 0;
  text::Span char_span;  // into the cleaned book text
  std::string text;
};

struct Token {
  std::size_t sentence_index = 0;
  text::Span char_span;  // into the sentence text
  std::string surface;
  std::string normalized;  // lowercase, surrounding punctuation stripped

  bool is_word() const { return !normalized.empty(); }
};

// Lowercase abbreviations including their final period ("dr.", "e.g.").
class AbbreviationList {
 public:
  AbbreviationList() = default;
  explicit AbbreviationList(std::vector<std::string> entries);

  static AbbreviationList parse(std::string_view content);
  static AbbreviationList load(const std::filesystem::path& path);
  static const AbbreviationList& builtin();

  // `word` is the whitespace-delimited word ending in the candidate period.
  bool matches(std::string_view word) const;
  std::size_t size() const { return entries_.size(); }

 private:
  std::unordered_set<std::string> entries_;
};

// Rule-based sentence splitter. A boundary is a run of . ! ? (plus any
// closing quotes or brackets) followed by whitespace or end of text, unless
// the next word starts with a lowercase letter or the period ends a known
// abbreviation or an initial. A blank line always ends a sentence.
class Segmenter {
 public:
  Segmenter() : abbreviations_(&AbbreviationList::builtin()) {}
  explicit Segmenter(const AbbreviationList& abbreviations) : abbreviations_(&abbreviations) {}

  std::vector<Sentence> split_sentences(std::string_view text,
                                        std::string_view source_id = {}) const;

 private:
  bool is_abbreviation_at(std::string_view text, std::size_t period) const;

  const AbbreviationList* abbreviations_;
};

std::string normalize_token(std::string_view surface);

std::vector<Token> tokenize(const Sentence& sentence);

struct SegmentedText {
  std::vector<Sentence> sentences;
  std::vector<std::vector<Token>> tokens;  // parallel to sentences

  std::size_t word_count() const;
};

SegmentedText segment(std::string_view text, std::string_view source_id,
                      const Segmenter& segmenter);

}  // namespace tempus::seg
