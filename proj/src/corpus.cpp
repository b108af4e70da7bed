#include "tempus/corpus.hpp"

#include <algorithm>
#include <unordered_map>
#include <unordered_set>

#include "tempus/error.hpp"
#include "tempus/io.hpp"
#include "tempus/segmentation.hpp"
#include "tempus/text.hpp"

namespace tempus::corpus {

namespace {

[[noreturn]] void bad_record(std::size_t index, const std::string& field, const std::string& why) {
  fail(ErrorKind::Validation,
       "metadata record " + std::to_string(index) + ", field '" + field + "': " + why);
}

const nlohmann::json& require(const nlohmann::json& rec, std::size_t index, const char* field) {
  auto it = rec.find(field);
  if (it == rec.end()) bad_record(index, field, "missing");
  return *it;
}

bool valid_source_id(const std::string& id) {
  if (id.empty() || id == "." || id == "..") return false;
  return id.find_first_of("/\\") == std::string::npos;
}

// Numeric-aware ordering so "page10" sorts after "page9".
bool natural_less(const std::string& a, const std::string& b) {
  std::size_t i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    if (text::is_ascii_digit(a[i]) && text::is_ascii_digit(b[j])) {
      std::size_t ie = i, je = j;
      while (ie < a.size() && text::is_ascii_digit(a[ie])) ++ie;
      while (je < b.size() && text::is_ascii_digit(b[je])) ++je;
      auto na = std::string_view(a).substr(i, ie - i);
      auto nb = std::string_view(b).substr(j, je - j);
      while (na.size() > 1 && na.front() == '0') na.remove_prefix(1);
      while (nb.size() > 1 && nb.front() == '0') nb.remove_prefix(1);
      if (na.size() != nb.size()) return na.size() < nb.size();
      if (na != nb) return na < nb;
      i = ie;
      j = je;
    } else {
      if (a[i] != b[j]) return a[i] < b[j];
      ++i;
      ++j;
    }
  }
  return a.size() - i < b.size() - j;
}

std::vector<std::string> split_lines(std::string_view s) {
  std::vector<std::string> lines;
  std::size_t pos = 0;
  for (;;) {
    auto nl = s.find('\n', pos);
    if (nl == std::string_view::npos) {
      lines.emplace_back(s.substr(pos));
      break;
    }
    lines.emplace_back(s.substr(pos, nl - pos));
    pos = nl + 1;
  }
  return lines;
}

bool is_page_number_line(std::string_view line, bool roman) {
  std::size_t b = 0, e = line.size();
  while (b < e && text::is_horizontal_space(line[b])) ++b;
  while (e > b && text::is_horizontal_space(line[e - 1])) --e;
  if (b == e) return false;
  const auto core = line.substr(b, e - b);
  if (std::all_of(core.begin(), core.end(), text::is_ascii_digit)) return true;
  if (roman && core.size() <= 8) {
    return core.find_first_not_of("ivxlcdm") == std::string_view::npos;
  }
  return false;
}

// One left-to-right pass of the dehyphenation rule; returns joins made.
int dehyphenate_pass(std::string& s) {
  std::string out;
  out.reserve(s.size());
  int joins = 0;
  std::size_t i = 0;
  const std::size_t n = s.size();
  while (i < n) {
    if (s[i] == '-') {
      std::size_t j = i + 1;
      while (j < n && text::is_horizontal_space(s[j])) ++j;
      if (j < n && s[j] == '\n') {
        std::size_t k = j + 1;
        while (k < n && text::is_horizontal_space(s[k])) ++k;
        if (k < n && text::is_ascii_lower(s[k])) {
          ++joins;
          i = k;
          continue;
        }
      }
    }
    out.push_back(s[i]);
    ++i;
  }
  s.swap(out);
  return joins;
}

std::string normalize_key(std::string_view s) { return text::to_lower(text::collapse_whitespace(s)); }

}  // namespace

std::vector<BookMetadata> parse_metadata(const nlohmann::json& doc, const fs::path& base_dir) {
  if (!doc.is_array()) fail(ErrorKind::Validation, "metadata must be a JSON array of records");
  std::vector<BookMetadata> out;
  std::unordered_set<std::string> seen;
  for (std::size_t i = 0; i < doc.size(); ++i) {
    const auto& rec = doc[i];
    if (!rec.is_object()) bad_record(i, "(record)", "not an object");
    BookMetadata m;

    const auto& id = require(rec, i, "source_id");
    if (!id.is_string()) bad_record(i, "source_id", "expected string");
    m.source_id = id.get<std::string>();
    if (!valid_source_id(m.source_id)) bad_record(i, "source_id", "empty or contains a path separator");

    const auto& title = require(rec, i, "title");
    if (!title.is_string()) bad_record(i, "title", "expected string");
    m.title = title.get<std::string>();

    const auto& authors = require(rec, i, "authors");
    if (!authors.is_array()) bad_record(i, "authors", "expected array of strings");
    for (const auto& a : authors) {
      if (!a.is_string()) bad_record(i, "authors", "expected array of strings");
      m.authors.push_back(a.get<std::string>());
    }

    const auto& year = require(rec, i, "year");
    if (!year.is_number_integer()) bad_record(i, "year", "expected integer");
    m.year = year.get<int>();

    const auto& range = require(rec, i, "main_page_range");
    if (!range.is_array() || range.size() != 2 || !range[0].is_number_integer() ||
        !range[1].is_number_integer()) {
      bad_record(i, "main_page_range", "expected [start, end] integers");
    }
    m.main_page_range = {range[0].get<int>(), range[1].get<int>()};
    if (m.main_page_range.first < 1 || m.main_page_range.first > m.main_page_range.last) {
      bad_record(i, "main_page_range", "need 1 <= start <= end");
    }

    const auto& raw = require(rec, i, "raw_path");
    if (!raw.is_string()) bad_record(i, "raw_path", "expected string");
    fs::path p = raw.get<std::string>();
    m.raw_path = p.is_absolute() ? p : base_dir / p;

    if (!seen.insert(m.source_id).second) {
      fail(ErrorKind::Validation, "duplicate source_id \"" + m.source_id + "\" in metadata record " +
                                      std::to_string(i));
    }
    out.push_back(std::move(m));
  }
  return out;
}

std::vector<BookMetadata> load_metadata(const fs::path& path) {
  if (!fs::exists(path)) fail(ErrorKind::MissingArtifact, "metadata file not found: " + path.string());
  return parse_metadata(io::read_json(path), path.parent_path());
}

RawBook load_raw_book(const std::string& source_id, const fs::path& path) {
  RawBook book;
  book.source_id = source_id;
  if (fs::is_directory(path)) {
    std::vector<std::string> names;
    for (const auto& entry : fs::directory_iterator(path)) {
      if (entry.is_regular_file()) names.push_back(entry.path().filename().string());
    }
    std::sort(names.begin(), names.end(), natural_less);
    for (const auto& name : names) book.pages.push_back(io::read_file(path / name));
  } else if (fs::is_regular_file(path)) {
    const auto content = io::read_file(path);
    std::size_t pos = 0;
    for (;;) {
      auto ff = content.find('\f', pos);
      if (ff == std::string::npos) {
        // A trailing form feed terminates the last page rather than opening a new one.
        if (pos < content.size() || book.pages.empty()) book.pages.push_back(content.substr(pos));
        break;
      }
      book.pages.push_back(content.substr(pos, ff - pos));
      pos = ff + 1;
    }
  } else {
    fail(ErrorKind::MissingArtifact, "raw text for " + source_id + " not found: " + path.string());
  }
  if (book.pages.empty()) fail(ErrorKind::Validation, "raw text for " + source_id + " has no pages");
  return book;
}

std::string extract_main_text(const RawBook& raw, PageRange range) {
  const auto pages = static_cast<int>(raw.pages.size());
  if (range.first < 1 || range.last < range.first || range.last > pages) {
    fail(ErrorKind::Validation, raw.source_id + ": page range (" + std::to_string(range.first) + "," +
                                    std::to_string(range.last) + ") outside 1.." +
                                    std::to_string(pages));
  }
  std::string out;
  for (int p = range.first; p <= range.last; ++p) {
    if (p > range.first) out.push_back('\n');
    out += raw.pages[static_cast<std::size_t>(p - 1)];
  }
  return out;
}

CleanResult clean_text(std::string_view input, const CleanOptions& options) {
  CleanResult result;
  auto& log = result.log;

  // 1. Page numbers.
  std::string s;
  {
    const auto lines = split_lines(input);
    bool first = true;
    for (const auto& line : lines) {
      if (is_page_number_line(line, options.strip_roman_page_numbers)) {
        ++log.page_numbers;
        continue;
      }
      if (!first) s.push_back('\n');
      s += line;
      first = false;
    }
  }

  // 2. Mid-word line breaks. Joining can expose a new "-\n" pair, so iterate.
  for (int joined = dehyphenate_pass(s); joined > 0; joined = dehyphenate_pass(s)) {
    log.dehyphenations += joined;
  }

  // 3. Whitespace.
  std::string out;
  out.reserve(s.size());
  std::size_t i = 0;
  const std::size_t n = s.size();
  while (i < n) {
    std::size_t line_end = s.find('\n', i);
    if (line_end == std::string::npos) line_end = n;
    std::size_t p = i;
    bool at_line_start = true;
    while (p < line_end) {
      if (!text::is_horizontal_space(s[p])) {
        out.push_back(s[p++]);
        at_line_start = false;
        continue;
      }
      std::size_t q = p;
      while (q < line_end && text::is_horizontal_space(s[q])) ++q;
      const bool at_line_end = q == line_end;
      if (at_line_start || at_line_end) {
        ++log.whitespace;
      } else {
        if (q - p != 1 || s[p] != ' ') ++log.whitespace;
        out.push_back(' ');
      }
      p = q;
    }
    if (line_end < n) out.push_back('\n');
    i = line_end + 1;
  }

  std::string capped;
  capped.reserve(out.size());
  for (std::size_t k = 0; k < out.size();) {
    if (out[k] != '\n') {
      capped.push_back(out[k++]);
      continue;
    }
    std::size_t e = k;
    while (e < out.size() && out[e] == '\n') ++e;
    if (e - k >= 3) ++log.whitespace;
    capped.append(std::min<std::size_t>(e - k, 2), '\n');
    k = e;
  }

  result.text = std::string(text::trim(capped));
  return result;
}

std::vector<BookDocument> deduplicate(std::vector<BookDocument> books,
                                      std::vector<DuplicateRecord>* removed) {
  std::unordered_map<std::string, std::string> by_key;
  std::unordered_map<std::string, std::string> by_hash;
  std::vector<BookDocument> kept;
  kept.reserve(books.size());
  for (auto& book : books) {
    std::string key = normalize_key(book.title);
    for (const auto& a : book.authors) {
      key += '\x1f';
      key += normalize_key(a);
    }
    const auto hash = text::sha256_hex(book.text);
    if (auto it = by_key.find(key); it != by_key.end()) {
      if (removed) removed->push_back({book.source_id, it->second, "title"});
      continue;
    }
    if (auto it = by_hash.find(hash); it != by_hash.end()) {
      if (removed) removed->push_back({book.source_id, it->second, "content"});
      continue;
    }
    by_key.emplace(key, book.source_id);
    by_hash.emplace(hash, book.source_id);
    kept.push_back(std::move(book));
  }
  return kept;
}

BookCounts count_units(const BookDocument& book, const seg::Segmenter& segmenter) {
  const auto segmented = seg::segment(book.text, book.source_id, segmenter);
  BookCounts c;
  c.source_id = book.source_id;
  c.sentences = static_cast<long long>(segmented.sentences.size());
  c.words = static_cast<long long>(segmented.word_count());
  c.characters = static_cast<long long>(text::count_code_points(book.text));
  return c;
}

double median(std::vector<double> values) {
  if (values.empty()) fail(ErrorKind::Validation, "median of empty set");
  std::sort(values.begin(), values.end());
  const auto n = values.size();
  if (n % 2 == 1) return values[n / 2];
  return (values[n / 2 - 1] + values[n / 2]) / 2.0;
}

CorpusStats corpus_stats(std::vector<BookCounts> counts) {
  if (counts.empty()) fail(ErrorKind::Validation, "corpus statistics need at least one book");
  std::sort(counts.begin(), counts.end(),
            [](const BookCounts& a, const BookCounts& b) { return a.source_id < b.source_id; });
  CorpusStats stats;
  stats.books = counts.size();
  auto summarize = [&](auto member) {
    UnitSummary u;
    std::vector<double> values;
    for (const auto& c : counts) {
      u.total += c.*member;
      values.push_back(static_cast<double>(c.*member));
    }
    u.average = static_cast<double>(u.total) / static_cast<double>(counts.size());
    u.median = median(std::move(values));
    return u;
  };
  stats.sentences = summarize(&BookCounts::sentences);
  stats.words = summarize(&BookCounts::words);
  stats.characters = summarize(&BookCounts::characters);
  stats.per_book = std::move(counts);
  return stats;
}

CorpusStats corpus_stats(const std::vector<BookDocument>& books, const seg::Segmenter& segmenter) {
  std::vector<BookCounts> counts;
  counts.reserve(books.size());
  for (const auto& b : books) counts.push_back(count_units(b, segmenter));
  return corpus_stats(std::move(counts));
}

nlohmann::json to_json(const CleaningLog& log) {
  return {{"page_numbers", log.page_numbers},
          {"dehyphenations", log.dehyphenations},
          {"whitespace", log.whitespace}};
}

nlohmann::json to_json(const CorpusStats& stats) {
  auto unit = [](const UnitSummary& u) {
    return nlohmann::json{{"average", u.average}, {"median", u.median}, {"total", u.total}};
  };
  nlohmann::json per_book = nlohmann::json::array();
  for (const auto& c : stats.per_book) {
    per_book.push_back({{"source_id", c.source_id},
                        {"sentences", c.sentences},
                        {"words", c.words},
                        {"characters", c.characters}});
  }
  return {{"books", stats.books},
          {"sentences", unit(stats.sentences)},
          {"words", unit(stats.words)},
          {"characters", unit(stats.characters)},
          {"character_convention", "unicode code points of cleaned text, whitespace included"},
          {"per_book", per_book}};
}

}  // namespace tempus::corpus
