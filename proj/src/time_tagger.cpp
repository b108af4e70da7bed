#include "tempus/time_tagger.hpp"

#include <algorithm>
#include <map>
#include <unordered_map>

#include "tempus/embedded_data.hpp"
#include "tempus/error.hpp"
#include "tempus/io.hpp"

namespace tempus::timex {

namespace {

std::vector<std::string_view> split_tabs(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t pos = 0;
  for (;;) {
    auto tab = line.find('\t', pos);
    if (tab == std::string_view::npos) {
      out.push_back(line.substr(pos));
      return out;
    }
    out.push_back(line.substr(pos, tab - pos));
    pos = tab + 1;
  }
}

bool is_ident_char(char c) {
  return text::is_ascii_upper(c) || text::is_ascii_digit(c) || c == '_';
}

// Replaces {NAME} with the macro body when NAME is defined; other braces
// (regex quantifiers such as \d{1,2}) are left alone.
std::string expand_macros(std::string_view pattern,
                          const std::unordered_map<std::string, std::string>& macros) {
  std::string out;
  std::size_t i = 0;
  while (i < pattern.size()) {
    if (pattern[i] == '{') {
      std::size_t j = i + 1;
      while (j < pattern.size() && is_ident_char(pattern[j])) ++j;
      if (j < pattern.size() && pattern[j] == '}' && j > i + 1) {
        auto it = macros.find(std::string(pattern.substr(i + 1, j - i - 1)));
        if (it != macros.end()) {
          out += it->second;
          i = j + 1;
          continue;
        }
      }
    }
    out.push_back(pattern[i++]);
  }
  return out;
}

struct Candidate {
  std::size_t begin;
  std::size_t end;
  std::size_t rule;
};

}  // namespace

TimeGrammar TimeGrammar::parse(std::string_view content) {
  TimeGrammar g;
  std::unordered_map<std::string, std::string> macros;
  std::size_t pos = 0;
  std::size_t lineno = 0;
  while (pos <= content.size()) {
    auto nl = content.find('\n', pos);
    if (nl == std::string_view::npos) nl = content.size();
    std::string_view line = content.substr(pos, nl - pos);
    pos = nl + 1;
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (text::trim(line).empty() || line.front() == '#') continue;

    const auto fields = split_tabs(line);
    const auto where = "time grammar line " + std::to_string(lineno);
    if (fields[0] == "@define") {
      if (fields.size() != 3) fail(ErrorKind::Validation, where + ": @define needs NAME and pattern");
      macros[std::string(fields[1])] = expand_macros(fields[2], macros);
      continue;
    }
    if (fields.size() != 3) {
      fail(ErrorKind::Validation, where + ": expected rule_id<TAB>pattern<TAB>description");
    }
    GrammarRule rule;
    rule.rule_id = std::string(fields[0]);
    std::string_view pattern = fields[1];
    if (pattern.substr(0, 4) == "(?i)") {
      rule.case_insensitive = true;
      pattern.remove_prefix(4);
    }
    rule.pattern = expand_macros(pattern, macros);
    rule.description = std::string(fields[2]);
    auto flags = std::regex::ECMAScript | std::regex::optimize;
    if (rule.case_insensitive) flags |= std::regex::icase;
    try {
      rule.regex = std::regex(rule.pattern, flags);
    } catch (const std::regex_error& e) {
      fail(ErrorKind::Validation, where + " (" + rule.rule_id + "): " + e.what());
    }
    for (const auto& other : g.rules_) {
      if (other.rule_id == rule.rule_id) fail(ErrorKind::Validation, where + ": duplicate rule_id");
    }
    g.rules_.push_back(std::move(rule));
  }
  if (g.rules_.empty()) fail(ErrorKind::Validation, "time grammar has no rules");
  return g;
}

TimeGrammar TimeGrammar::load(const std::filesystem::path& path) { return parse(io::read_file(path)); }

const TimeGrammar& TimeGrammar::builtin() {
  static const TimeGrammar g = parse(embedded::time_grammar_tsv());
  return g;
}

std::string normalize_expression(std::string_view surface) {
  std::string s = text::to_lower(text::collapse_whitespace(surface));
  if (s.rfind("the ", 0) == 0) s.erase(0, 4);
  return s;
}

std::vector<Occurrence> tag_time_expressions(const seg::SegmentedText& book,
                                             const TimeGrammar& grammar) {
  std::vector<Occurrence> out;
  const auto& rules = grammar.rules();
  for (std::size_t s = 0; s < book.sentences.size(); ++s) {
    const auto& sentence = book.sentences[s];
    const std::string& txt = sentence.text;

    std::vector<Candidate> candidates;
    for (std::size_t r = 0; r < rules.size(); ++r) {
      for (auto it = std::sregex_iterator(txt.begin(), txt.end(), rules[r].regex);
           it != std::sregex_iterator(); ++it) {
        const auto b = static_cast<std::size_t>(it->position(0));
        const auto len = static_cast<std::size_t>(it->length(0));
        if (len > 0) candidates.push_back({b, b + len, r});
      }
    }
    std::sort(candidates.begin(), candidates.end(), [](const Candidate& a, const Candidate& b) {
      if (a.begin != b.begin) return a.begin < b.begin;
      if (a.end != b.end) return a.end > b.end;
      return a.rule < b.rule;
    });

    std::size_t last_end = 0;
    const auto& tokens = book.tokens[s];
    for (const auto& c : candidates) {
      if (c.begin < last_end) continue;
      last_end = c.end;
      Occurrence o;
      o.group = Group::Control;
      o.source_id = sentence.source_id;
      o.sentence_index = sentence.index;
      o.char_span = {c.begin, c.end};
      o.matched_surface = txt.substr(c.begin, c.end - c.begin);
      o.expression = normalize_expression(o.matched_surface);
      o.rule_id = rules[c.rule].rule_id;
      // Tokens overlapping the match.
      o.token_begin = tokens.size();
      o.token_end = 0;
      for (std::size_t t = 0; t < tokens.size(); ++t) {
        if (tokens[t].char_span.end > c.begin && tokens[t].char_span.begin < c.end) {
          o.token_begin = std::min(o.token_begin, t);
          o.token_end = t + 1;
        }
      }
      out.push_back(std::move(o));
    }
  }
  return out;
}

std::vector<TimeExpression> build_control_group(const std::vector<Occurrence>& time_occurrences,
                                                const lexicon::Lexicon& lexicon,
                                                long long min_count) {
  if (min_count < 1) fail(ErrorKind::Validation, "min_count must be at least 1");
  std::map<std::string, std::map<std::string, long long>> per_form;
  for (const auto& o : time_occurrences) ++per_form[o.expression][o.rule_id];

  std::vector<TimeExpression> out;
  for (const auto& [form, rules] : per_form) {
    if (lexicon.contains(form)) continue;
    TimeExpression e;
    e.normalized = form;
    long long best = -1;
    for (const auto& [rule, count] : rules) {
      e.total_count += count;
      if (count > best) {
        best = count;
        e.rule_id = rule;
      }
    }
    if (e.total_count >= min_count) out.push_back(std::move(e));
  }
  std::sort(out.begin(), out.end(), [](const TimeExpression& a, const TimeExpression& b) {
    if (a.total_count != b.total_count) return a.total_count > b.total_count;
    return a.normalized < b.normalized;
  });
  return out;
}

nlohmann::json to_json(const TimeExpression& e) {
  return {{"normalized", e.normalized}, {"total_count", e.total_count}, {"rule_id", e.rule_id}};
}

TimeExpression time_expression_from_json(const nlohmann::json& j) {
  try {
    return {j.at("normalized").get<std::string>(), j.at("total_count").get<long long>(),
            j.at("rule_id").get<std::string>()};
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorKind::Validation, std::string("malformed control-group record: ") + e.what());
  }
}

}  // namespace tempus::timex
