#pragma once

#include <filesystem>
#include <regex>
#include <string>
#include <string_view>
#include <vector>

#include "tempus/lexicon.hpp"
#include "tempus/occurrence.hpp"
#include "tempus/segmentation.hpp"

namespace tempus::timex {

struct GrammarRule {
  std::string rule_id;
  std::string pattern;  // after macro expansion
  std::string description;
  bool case_insensitive = false;
  std::regex regex;
};

class TimeGrammar {
 public:
  static TimeGrammar parse(std::string_view tsv_content);
  static TimeGrammar load(const std::filesystem::path& path);
  static const TimeGrammar& builtin();

  const std::vector<GrammarRule>& rules() const { return rules_; }

 private:
  std::vector<GrammarRule> rules_;
};

// Lowercase, whitespace collapsed, leading "the" removed.
std::string normalize_expression(std::string_view surface);

// Leftmost-longest, non-overlapping matches across all rules, per sentence.
// Returned occurrences are unnumbered.
std::vector<Occurrence> tag_time_expressions(const seg::SegmentedText& book,
                                             const TimeGrammar& grammar);

struct TimeExpression {
  std::string normalized;
  long long total_count = 0;
  std::string rule_id;  // rule with the most occurrences of this form
};

// Groups by normalized form, drops lexicon adverbs and forms below
// `min_count`, and sorts by descending count then alphabetically.
std::vector<TimeExpression> build_control_group(const std::vector<Occurrence>& time_occurrences,
                                                const lexicon::Lexicon& lexicon,
                                                long long min_count = 50);

nlohmann::json to_json(const TimeExpression& e);
TimeExpression time_expression_from_json(const nlohmann::json& j);

}  // namespace tempus::timex
