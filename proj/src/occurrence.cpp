#include "tempus/occurrence.hpp"

#include <algorithm>
#include <tuple>

#include "tempus/error.hpp"

namespace tempus {

std::string_view group_name(Group g) { return g == Group::Lexicon ? "lexicon" : "control"; }

Group parse_group(std::string_view name) {
  if (name == "lexicon") return Group::Lexicon;
  if (name == "control") return Group::Control;
  fail(ErrorKind::Validation, "unknown group \"" + std::string(name) + "\"");
}

void assign_occurrence_ids(std::vector<Occurrence>& occurrences) {
  std::sort(occurrences.begin(), occurrences.end(), [](const Occurrence& a, const Occurrence& b) {
    return std::tie(a.source_id, a.sentence_index, a.char_span.begin, a.char_span.end) <
           std::tie(b.source_id, b.sentence_index, b.char_span.begin, b.char_span.end);
  });
  std::uint64_t next = 1;
  for (auto& o : occurrences) o.occurrence_id = next++;
}

nlohmann::json to_json(const Occurrence& o) {
  nlohmann::json j = {
      {"occurrence_id", o.occurrence_id},
      {"group", group_name(o.group)},
      {"source_id", o.source_id},
      {"sentence_index", o.sentence_index},
      {"token_span", {o.token_begin, o.token_end}},
      {"char_span", {o.char_span.begin, o.char_span.end}},
      {"matched_surface", o.matched_surface},
      {"expression", o.expression},
  };
  if (!o.category.empty()) j["category"] = o.category;
  if (!o.rule_id.empty()) j["rule_id"] = o.rule_id;
  return j;
}

Occurrence occurrence_from_json(const nlohmann::json& j) {
  try {
    Occurrence o;
    o.occurrence_id = j.at("occurrence_id").get<std::uint64_t>();
    o.group = parse_group(j.at("group").get<std::string>());
    o.source_id = j.at("source_id").get<std::string>();
    o.sentence_index = j.at("sentence_index").get<std::size_t>();
    o.token_begin = j.at("token_span").at(0).get<std::size_t>();
    o.token_end = j.at("token_span").at(1).get<std::size_t>();
    o.char_span = {j.at("char_span").at(0).get<std::size_t>(),
                   j.at("char_span").at(1).get<std::size_t>()};
    o.matched_surface = j.at("matched_surface").get<std::string>();
    o.expression = j.at("expression").get<std::string>();
    o.category = j.value("category", std::string());
    o.rule_id = j.value("rule_id", std::string());
    return o;
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorKind::Validation, std::string("malformed occurrence record: ") + e.what());
  }
}

}  // namespace tempus
