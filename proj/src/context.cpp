#include "tempus/context.hpp"

#include "tempus/error.hpp"

namespace tempus::context {

std::string_view kind_name(WindowKind k) {
  switch (k) {
    case WindowKind::Triplet: return "triplet";
    case WindowKind::PairLeading: return "pair-leading";
    case WindowKind::PairTrailing: return "pair-trailing";
    case WindowKind::Degenerate: return "degenerate";
  }
  return {};
}

WindowKind parse_kind(std::string_view name) {
  for (auto k : {WindowKind::Triplet, WindowKind::PairLeading, WindowKind::PairTrailing,
                 WindowKind::Degenerate}) {
    if (kind_name(k) == name) return k;
  }
  fail(ErrorKind::Validation, "unknown window kind \"" + std::string(name) + "\"");
}

ContextWindow extract_window(const Occurrence& occurrence, const std::vector<seg::Sentence>& sentences) {
  const auto idx = occurrence.sentence_index;
  if (idx >= sentences.size()) {
    fail(ErrorKind::Validation, "occurrence " + std::to_string(occurrence.occurrence_id) +
                                    " refers to missing sentence " + std::to_string(idx) + " of " +
                                    occurrence.source_id);
  }
  const bool has_prev = idx > 0;
  const bool has_next = idx + 1 < sentences.size();

  ContextWindow w;
  w.group = occurrence.group;
  w.occurrence_id = occurrence.occurrence_id;
  w.source_id = occurrence.source_id;
  w.expression = occurrence.expression;
  if (has_prev && has_next) {
    w.kind = WindowKind::Triplet;
  } else if (has_next) {
    w.kind = WindowKind::PairTrailing;
  } else if (has_prev) {
    w.kind = WindowKind::PairLeading;
  } else {
    w.kind = WindowKind::Degenerate;
  }

  std::size_t offset = 0;
  if (has_prev) {
    w.text = sentences[idx - 1].text + " ";
    offset = w.text.size();
  }
  w.text += sentences[idx].text;
  if (has_next) w.text += " " + sentences[idx + 1].text;

  w.aspect_span = {offset + occurrence.char_span.begin, offset + occurrence.char_span.end};
  w.aspect_surface = occurrence.matched_surface;
  if (!w.aspect_round_trips()) {
    fail(ErrorKind::Validation, "occurrence " + std::to_string(occurrence.occurrence_id) +
                                    ": surface \"" + occurrence.matched_surface +
                                    "\" does not match sentence text at its span");
  }
  return w;
}

std::vector<ContextWindow> extract_all(const std::vector<Occurrence>& occurrences,
                                       const SentenceIndex& corpus) {
  std::vector<ContextWindow> out;
  out.reserve(occurrences.size());
  for (const auto& o : occurrences) {
    auto it = corpus.find(o.source_id);
    if (it == corpus.end()) {
      fail(ErrorKind::Validation, "occurrence " + std::to_string(o.occurrence_id) +
                                      " refers to unknown source \"" + o.source_id + "\"");
    }
    out.push_back(extract_window(o, it->second));
  }
  return out;
}

nlohmann::json to_json(const ContextWindow& w) {
  return {{"occurrence_id", w.occurrence_id},
          {"group", group_name(w.group)},
          {"source_id", w.source_id},
          {"expression", w.expression},
          {"kind", kind_name(w.kind)},
          {"text", w.text},
          {"aspect_char_span", {w.aspect_span.begin, w.aspect_span.end}},
          {"aspect_surface", w.aspect_surface}};
}

ContextWindow window_from_json(const nlohmann::json& j) {
  try {
    ContextWindow w;
    w.occurrence_id = j.at("occurrence_id").get<std::uint64_t>();
    w.group = parse_group(j.at("group").get<std::string>());
    w.source_id = j.at("source_id").get<std::string>();
    w.expression = j.at("expression").get<std::string>();
    w.kind = parse_kind(j.at("kind").get<std::string>());
    w.text = j.at("text").get<std::string>();
    w.aspect_span = {j.at("aspect_char_span").at(0).get<std::size_t>(),
                     j.at("aspect_char_span").at(1).get<std::size_t>()};
    w.aspect_surface = j.at("aspect_surface").get<std::string>();
    return w;
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorKind::Validation, std::string("malformed window record: ") + e.what());
  }
}

}  // namespace tempus::context
