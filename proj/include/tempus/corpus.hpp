#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace tempus::seg {
class Segmenter;
}

namespace tempus::corpus {

namespace fs = std::filesystem;

// Inclusive, 1-based.
struct PageRange {
  int first = 1;
  int last = 1;
};

struct BookMetadata {
  std::string source_id;
  std::string title;
  std::vector<std::string> authors;
  int year = 0;
  PageRange main_page_range;
  fs::path raw_path;  // resolved against the metadata file's directory
};

struct RawBook {
  std::string source_id;
  std::vector<std::string> pages;
};

struct CleaningLog {
  int page_numbers = 0;
  int dehyphenations = 0;
  int whitespace = 0;

  bool operator==(const CleaningLog&) const = default;
};

struct CleanOptions {
  // Also drop lines holding only a lowercase roman numeral (front matter).
  bool strip_roman_page_numbers = false;
};

struct CleanResult {
  std::string text;
  CleaningLog log;
};

struct BookDocument {
  std::string source_id;
  std::string title;
  std::vector<std::string> authors;
  int year = 0;
  std::string text;
  CleaningLog cleaning_log;
};

struct DuplicateRecord {
  std::string source_id;
  std::string duplicate_of;
  std::string reason;  // "title" or "content"
};

struct UnitSummary {
  double average = 0;
  double median = 0;
  long long total = 0;
};

struct BookCounts {
  std::string source_id;
  long long sentences = 0;
  long long words = 0;
  long long characters = 0;
};

struct CorpusStats {
  std::size_t books = 0;
  UnitSummary sentences;
  UnitSummary words;
  UnitSummary characters;
  std::vector<BookCounts> per_book;  // sorted by source_id
};

std::vector<BookMetadata> parse_metadata(const nlohmann::json& doc, const fs::path& base_dir);
std::vector<BookMetadata> load_metadata(const fs::path& path);

// Accepts either a single file with pages separated by form feeds or a
// directory holding one file per page (ordered by numeric-aware file name).
RawBook load_raw_book(const std::string& source_id, const fs::path& path);

std::string extract_main_text(const RawBook& raw, PageRange range);

// Rules, in order: drop digit-only lines; join "-\n" + lowercase letter;
// collapse horizontal whitespace, cap blank-line runs, trim. Idempotent.
CleanResult clean_text(std::string_view text, const CleanOptions& options = {});

// Keeps the first book for each normalized title+authors key and each text
// hash; order is preserved.
std::vector<BookDocument> deduplicate(std::vector<BookDocument> books,
                                      std::vector<DuplicateRecord>* removed = nullptr);

// Characters are counted as Unicode code points of the cleaned text,
// whitespace included.
BookCounts count_units(const BookDocument& book, const seg::Segmenter& segmenter);

CorpusStats corpus_stats(std::vector<BookCounts> counts);
CorpusStats corpus_stats(const std::vector<BookDocument>& books, const seg::Segmenter& segmenter);

double median(std::vector<double> values);

nlohmann::json to_json(const CorpusStats& stats);
nlohmann::json to_json(const CleaningLog& log);

}  // namespace tempus::corpus
