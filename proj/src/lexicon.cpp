#include "tempus/lexicon.hpp"

#include <algorithm>
#include <map>

#include "tempus/csv.hpp"
#include "tempus/embedded_data.hpp"
#include "tempus/error.hpp"
#include "tempus/io.hpp"

namespace tempus::lexicon {

std::string_view category_name(Category c) {
  switch (c) {
    case Category::ImmediacySuddenness: return "Immediacy & Suddenness";
    case Category::FrequencyRepetition: return "Frequency & Repetition";
    case Category::DurationTimeBlindness: return "Duration & Time Blindness";
    case Category::SequenceRelativeTime: return "Sequence & Relative Time";
    case Category::Pace: return "Pace";
    case Category::Overlap: return "Overlap";
  }
  return {};
}

std::optional<Category> parse_category(std::string_view name) {
  for (auto c : kCategories) {
    if (category_name(c) == name) return c;
  }
  return std::nullopt;
}

Lexicon::Lexicon(std::vector<LexiconEntry> entries) : entries_(std::move(entries)) {
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    if (!index_.emplace(entries_[i].adverb, i).second) {
      fail(ErrorKind::Validation, "duplicate lexicon adverb \"" + entries_[i].adverb + "\"");
    }
  }
}

Lexicon Lexicon::parse(std::string_view csv_content, Shape shape) {
  const auto rows = csv::parse(csv_content);
  if (rows.empty() || rows[0].size() < 3 || rows[0][0] != "adverb" || rows[0][1] != "category" ||
      rows[0][2] != "subgroup") {
    fail(ErrorKind::Validation, "lexicon header must be: adverb,category,subgroup");
  }
  std::vector<LexiconEntry> entries;
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const auto& row = rows[r];
    if (row.size() != 3) {
      fail(ErrorKind::Validation, "lexicon row " + std::to_string(r) + ": expected 3 columns");
    }
    LexiconEntry e;
    e.adverb = text::to_lower(text::trim(row[0]));
    if (e.adverb.empty() || text::split_whitespace(e.adverb).size() != 1 ||
        seg::normalize_token(e.adverb) != e.adverb) {
      fail(ErrorKind::Validation, "lexicon row " + std::to_string(r) + ": adverb must be one word");
    }
    auto cat = parse_category(text::trim(row[1]));
    if (!cat) {
      fail(ErrorKind::Validation,
           "lexicon row " + std::to_string(r) + ": unknown category \"" + row[1] + "\"");
    }
    e.category = *cat;
    e.subgroup = std::string(text::trim(row[2]));
    if (!e.subgroup.empty() && e.category != Category::SequenceRelativeTime) {
      fail(ErrorKind::Validation,
           "lexicon row " + std::to_string(r) + ": subgroup only allowed for Sequence & Relative Time");
    }
    entries.push_back(std::move(e));
  }
  Lexicon lex(std::move(entries));
  if (lex.size() == 0) fail(ErrorKind::Validation, "lexicon is empty");
  if (shape == Shape::Reference) {
    if (lex.size() != 80) {
      fail(ErrorKind::Validation, "lexicon has " + std::to_string(lex.size()) + " entries, expected 80");
    }
    for (std::size_t i = 0; i < kCategories.size(); ++i) {
      if (lex.category_size(kCategories[i]) != kReferenceSizes[i]) {
        fail(ErrorKind::Validation, "lexicon category " + std::string(category_name(kCategories[i])) +
                                        " has " + std::to_string(lex.category_size(kCategories[i])) +
                                        " entries, expected " + std::to_string(kReferenceSizes[i]));
      }
    }
  }
  return lex;
}

Lexicon Lexicon::load(const std::filesystem::path& path, Shape shape) {
  return parse(io::read_file(path), shape);
}

const Lexicon& Lexicon::builtin() {
  static const Lexicon lex = parse(embedded::lexicon_csv());
  return lex;
}

const LexiconEntry* Lexicon::find(std::string_view normalized) const {
  auto it = index_.find(std::string(normalized));
  return it == index_.end() ? nullptr : &entries_[it->second];
}

std::size_t Lexicon::category_size(Category c) const {
  return static_cast<std::size_t>(std::count_if(entries_.begin(), entries_.end(),
                                                [c](const LexiconEntry& e) { return e.category == c; }));
}

std::vector<Occurrence> match_occurrences(const seg::SegmentedText& book, const Lexicon& lexicon,
                                          const PosFilter& pos_filter) {
  std::vector<Occurrence> out;
  for (std::size_t s = 0; s < book.sentences.size(); ++s) {
    const auto& sentence = book.sentences[s];
    const auto& tokens = book.tokens[s];
    for (std::size_t t = 0; t < tokens.size(); ++t) {
      const auto& tok = tokens[t];
      const auto* entry = lexicon.find(tok.normalized);
      if (!entry) continue;
      if (pos_filter && !pos_filter(sentence, tokens, t)) continue;
      const auto inner = text::strip_punct(tok.surface);
      Occurrence o;
      o.group = Group::Lexicon;
      o.source_id = sentence.source_id;
      o.sentence_index = sentence.index;
      o.token_begin = t;
      o.token_end = t + 1;
      o.char_span = {tok.char_span.begin + inner.begin, tok.char_span.begin + inner.end};
      o.matched_surface = tok.surface.substr(inner.begin, inner.size());
      o.expression = entry->adverb;
      o.category = std::string(category_name(entry->category));
      out.push_back(std::move(o));
    }
  }
  return out;
}

CategoryCounts category_counts(const std::vector<Occurrence>& occurrences, const Lexicon& lexicon) {
  std::map<std::string, std::size_t> per_adverb;
  for (const auto& e : lexicon.entries()) per_adverb[e.adverb] = 0;
  for (const auto& o : occurrences) {
    if (o.group != Group::Lexicon) continue;
    auto it = per_adverb.find(o.expression);
    if (it == per_adverb.end()) {
      fail(ErrorKind::Validation, "occurrence of \"" + o.expression + "\" is not in the lexicon");
    }
    ++it->second;
  }

  CategoryCounts out;
  for (auto c : kCategories) out.categories.push_back({c, lexicon.category_size(c), 0, 0});
  for (const auto& [adverb, count] : per_adverb) {
    const auto* entry = lexicon.find(adverb);
    auto& tally = out.categories[static_cast<std::size_t>(entry->category)];
    tally.total_mentions += count;
    out.total_mentions += count;
    if (count > 0) {
      ++tally.unique_adverbs;
      ++out.unique_adverbs;
    } else {
      out.absent_adverbs.push_back(adverb);
    }
    out.per_adverb.emplace_back(adverb, count);
  }
  return out;
}

}  // namespace tempus::lexicon
