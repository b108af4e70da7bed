#pragma once

#include <array>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "tempus/occurrence.hpp"
#include "tempus/segmentation.hpp"

namespace tempus::lexicon {

enum class Category {
  ImmediacySuddenness,
  FrequencyRepetition,
  DurationTimeBlindness,
  SequenceRelativeTime,
  Pace,
  Overlap,
};

inline constexpr std::array<Category, 6> kCategories = {
    Category::ImmediacySuddenness, Category::FrequencyRepetition,
    Category::DurationTimeBlindness, Category::SequenceRelativeTime,
    Category::Pace, Category::Overlap,
};

// Reference inventory sizes, in kCategories order.
inline constexpr std::array<std::size_t, 6> kReferenceSizes = {13, 21, 16, 23, 5, 2};

std::string_view category_name(Category c);
std::optional<Category> parse_category(std::string_view name);

struct LexiconEntry {
  std::string adverb;
  Category category;
  std::string subgroup;  // Sequence & Relative Time only
};

enum class Shape {
  Reference,  // exactly 80 entries with the reference category sizes
  Any,        // any non-empty lexicon over the six categories
};

class Lexicon {
 public:
  Lexicon() = default;
  explicit Lexicon(std::vector<LexiconEntry> entries);

  static Lexicon parse(std::string_view csv_content, Shape shape = Shape::Reference);
  static Lexicon load(const std::filesystem::path& path, Shape shape = Shape::Reference);
  static const Lexicon& builtin();

  const std::vector<LexiconEntry>& entries() const { return entries_; }
  const LexiconEntry* find(std::string_view normalized) const;
  bool contains(std::string_view normalized) const { return find(normalized) != nullptr; }
  std::size_t size() const { return entries_.size(); }
  std::size_t category_size(Category c) const;

 private:
  std::vector<LexiconEntry> entries_;
  std::unordered_map<std::string, std::size_t> index_;
};

// Optional part-of-speech hook: return false to reject the token at
// `token_index` of `tokens`. Not set by default.
using PosFilter = std::function<bool(const seg::Sentence& sentence,
                                     const std::vector<seg::Token>& tokens,
                                     std::size_t token_index)>;

// Whole-token, case-insensitive matches on normalized token forms. Returned
// occurrences are unnumbered (see assign_occurrence_ids).
std::vector<Occurrence> match_occurrences(const seg::SegmentedText& book, const Lexicon& lexicon,
                                          const PosFilter& pos_filter = {});

struct CategoryTally {
  Category category;
  std::size_t lexicon_size = 0;
  std::size_t unique_adverbs = 0;  // adverbs with at least one occurrence
  std::size_t total_mentions = 0;
};

struct CategoryCounts {
  std::vector<CategoryTally> categories;  // kCategories order
  std::size_t total_mentions = 0;
  std::size_t unique_adverbs = 0;
  std::vector<std::string> absent_adverbs;  // sorted
  std::vector<std::pair<std::string, std::size_t>> per_adverb;  // sorted by adverb
};

CategoryCounts category_counts(const std::vector<Occurrence>& occurrences, const Lexicon& lexicon);

}  // namespace tempus::lexicon
