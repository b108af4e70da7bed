#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "tempus/text.hpp"

namespace tempus {

enum class Group { Lexicon, Control };

std::string_view group_name(Group g);
Group parse_group(std::string_view name);

// One marked hit of a temporal expression. Lexicon hits carry the adverb and
// its category; control hits carry the normalized time expression and the
// grammar rule that produced it.
struct Occurrence {
  std::uint64_t occurrence_id = 0;
  Group group = Group::Lexicon;
  std::string source_id;
  std::size_t sentence_index = 0;
  std::size_t token_begin = 0;  // [token_begin, token_end) within the sentence
  std::size_t token_end = 0;
  text::Span char_span;  // within the sentence text
  std::string matched_surface;
  std::string expression;
  std::string category;
  std::string rule_id;
};

// Sorts by (source_id, sentence_index, offset) and numbers from 1.
void assign_occurrence_ids(std::vector<Occurrence>& occurrences);

nlohmann::json to_json(const Occurrence& o);
Occurrence occurrence_from_json(const nlohmann::json& j);

}  // namespace tempus
