#pragma once

// Internal helpers shared by the pipeline stages and the report writer.

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "tempus/corpus.hpp"
#include "tempus/lexicon.hpp"
#include "tempus/segmentation.hpp"
#include "tempus/tate.hpp"
#include "tempus/time_tagger.hpp"

namespace tempus::pipeline {

class Workspace {
 public:
  explicit Workspace(std::filesystem::path root) : root_(std::move(root)) {}

  std::filesystem::path path(std::string_view rel) const { return root_ / std::string(rel); }
  bool has(std::string_view rel) const { return std::filesystem::exists(path(rel)); }
  // Path of a prerequisite; MissingArtifact naming it when absent.
  std::filesystem::path require(std::string_view rel) const;

  // Workspace overrides win over the built-in data files.
  const seg::AbbreviationList& abbreviations();
  seg::Segmenter segmenter() { return seg::Segmenter(abbreviations()); }
  const lexicon::Lexicon& lexicon();
  const timex::TimeGrammar& grammar();
  const tate::ItemRegistry& tate_items();

  // Cleaned books listed in the ingest manifest, in manifest order.
  std::vector<corpus::BookDocument> books() const;

 private:
  std::filesystem::path root_;
  std::optional<seg::AbbreviationList> abbreviations_;
  std::optional<lexicon::Lexicon> lexicon_;
  std::optional<timex::TimeGrammar> grammar_;
  std::optional<tate::ItemRegistry> tate_items_;
};

std::string book_file(std::string_view source_id);

}  // namespace tempus::pipeline
