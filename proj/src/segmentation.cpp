#include "tempus/segmentation.hpp"

#include <array>

#include "tempus/embedded_data.hpp"
#include "tempus/io.hpp"

namespace tempus::seg {

namespace {

bool is_terminator(char c) { return c == '.' || c == '!' || c == '?'; }

constexpr std::array<std::string_view, 3> kClosingMarks = {"”", "’", "»"};
constexpr std::array<std::string_view, 3> kOpeningMarks = {"“", "‘", "«"};

std::size_t closing_mark_length(std::string_view s, std::size_t pos) {
  const char c = s[pos];
  if (c == '"' || c == '\'' || c == ')' || c == ']') return 1;
  for (auto m : kClosingMarks) {
    if (s.substr(pos, m.size()) == m) return m.size();
  }
  return 0;
}

std::size_t opening_mark_length(std::string_view s, std::size_t pos) {
  const char c = s[pos];
  if (c == '"' || c == '\'' || c == '(' || c == '[') return 1;
  for (auto m : kOpeningMarks) {
    if (s.substr(pos, m.size()) == m) return m.size();
  }
  return 0;
}

}  // namespace

AbbreviationList::AbbreviationList(std::vector<std::string> entries) {
  for (auto& e : entries) entries_.insert(text::to_lower(e));
}

AbbreviationList AbbreviationList::parse(std::string_view content) {
  std::vector<std::string> entries;
  std::size_t pos = 0;
  while (pos <= content.size()) {
    auto nl = content.find('\n', pos);
    if (nl == std::string_view::npos) nl = content.size();
    const auto line = text::trim(content.substr(pos, nl - pos));
    if (!line.empty() && line.front() != '#') entries.emplace_back(line);
    pos = nl + 1;
  }
  return AbbreviationList(std::move(entries));
}

AbbreviationList AbbreviationList::load(const std::filesystem::path& path) {
  return parse(io::read_file(path));
}

const AbbreviationList& AbbreviationList::builtin() {
  static const AbbreviationList list = parse(embedded::abbreviations_txt());
  return list;
}

bool AbbreviationList::matches(std::string_view word) const {
  if (word.size() == 2 && text::is_ascii_upper(word[0]) && word[1] == '.') return true;
  return entries_.count(text::to_lower(word)) > 0;
}

bool Segmenter::is_abbreviation_at(std::string_view text, std::size_t period) const {
  std::size_t b = period;
  while (b > 0 && !text::is_space(text[b - 1])) --b;
  while (b < period) {
    const auto n = opening_mark_length(text, b);
    if (n == 0) break;
    b += n;
  }
  return abbreviations_->matches(text.substr(b, period + 1 - b));
}

std::vector<Sentence> Segmenter::split_sentences(std::string_view text,
                                                 std::string_view source_id) const {
  std::vector<Sentence> out;
  constexpr auto npos = std::string_view::npos;
  std::size_t start = npos;

  auto emit = [&](std::size_t b, std::size_t e) {
    while (e > b && text::is_space(text[e - 1])) --e;
    if (e <= b) return;
    Sentence s;
    s.source_id = std::string(source_id);
    s.index = out.size();
    s.char_span = {b, e};
    s.text = std::string(text.substr(b, e - b));
    out.push_back(std::move(s));
  };

  const std::size_t n = text.size();
  std::size_t i = 0;
  while (i < n) {
    const char c = text[i];
    if (text::is_space(c)) {
      if (c == '\n' && start != npos) {
        std::size_t j = i + 1;
        while (j < n && text::is_horizontal_space(text[j])) ++j;
        if (j < n && text[j] == '\n') {
          emit(start, i);
          start = npos;
          i = j;
          continue;
        }
      }
      ++i;
      continue;
    }
    if (start == npos) start = i;
    if (!is_terminator(c)) {
      ++i;
      continue;
    }

    std::size_t j = i;
    while (j < n && is_terminator(text[j])) ++j;
    const bool single_period = (j - i == 1) && c == '.';
    while (j < n) {
      const auto m = closing_mark_length(text, j);
      if (m == 0) break;
      j += m;
    }
    if (j < n && !text::is_space(text[j])) {
      i = j;
      continue;
    }
    std::size_t k = j;
    while (k < n && text::is_space(text[k])) ++k;

    bool split = true;
    if (k < n && text::is_ascii_lower(text[k])) split = false;
    if (split && single_period && is_abbreviation_at(text, i)) split = false;

    if (split) {
      emit(start, j);
      start = npos;
      i = k;
    } else {
      i = j;
    }
  }
  if (start != npos) emit(start, n);
  return out;
}

std::string normalize_token(std::string_view surface) {
  const auto span = text::strip_punct(surface);
  return text::to_lower(surface.substr(span.begin, span.size()));
}

std::vector<Token> tokenize(const Sentence& sentence) {
  std::vector<Token> out;
  const std::string_view s = sentence.text;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && text::is_space(s[i])) ++i;
    const std::size_t b = i;
    while (i < s.size() && !text::is_space(s[i])) ++i;
    if (i == b) break;
    Token t;
    t.sentence_index = sentence.index;
    t.char_span = {b, i};
    t.surface = std::string(s.substr(b, i - b));
    t.normalized = normalize_token(t.surface);
    out.push_back(std::move(t));
  }
  return out;
}

std::size_t SegmentedText::word_count() const {
  std::size_t n = 0;
  for (const auto& toks : tokens) {
    for (const auto& t : toks) n += t.is_word() ? 1 : 0;
  }
  return n;
}

SegmentedText segment(std::string_view text, std::string_view source_id,
                      const Segmenter& segmenter) {
  SegmentedText out;
  out.sentences = segmenter.split_sentences(text, source_id);
  out.tokens.reserve(out.sentences.size());
  for (const auto& s : out.sentences) out.tokens.push_back(tokenize(s));
  return out;
}

}  // namespace tempus::seg
