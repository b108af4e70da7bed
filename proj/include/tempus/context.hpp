#pragma once

#include <map>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "tempus/occurrence.hpp"
#include "tempus/segmentation.hpp"

namespace tempus::context {

enum class WindowKind {
  Triplet,       // preceding + containing + following
  PairLeading,   // preceding + containing (last sentence of the book)
  PairTrailing,  // containing + following (first sentence of the book)
  Degenerate,    // single-sentence book
};

std::string_view kind_name(WindowKind k);
WindowKind parse_kind(std::string_view name);

struct ContextWindow {
  Group group = Group::Lexicon;
  std::uint64_t occurrence_id = 0;
  std::string source_id;
  std::string expression;
  WindowKind kind = WindowKind::Triplet;
  std::string text;  // sentences joined by single spaces
  text::Span aspect_span;
  std::string aspect_surface;

  bool aspect_round_trips() const {
    return aspect_span.end <= text.size() &&
           std::string_view(text).substr(aspect_span.begin, aspect_span.size()) == aspect_surface;
  }
};

ContextWindow extract_window(const Occurrence& occurrence, const std::vector<seg::Sentence>& sentences);

// Sentences per source_id.
using SentenceIndex = std::map<std::string, std::vector<seg::Sentence>, std::less<>>;

// One window per occurrence, in input order.
std::vector<ContextWindow> extract_all(const std::vector<Occurrence>& occurrences,
                                       const SentenceIndex& corpus);

nlohmann::json to_json(const ContextWindow& w);
ContextWindow window_from_json(const nlohmann::json& j);

}  // namespace tempus::context
