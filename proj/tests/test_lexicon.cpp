#include <doctest.h>

#include <set>
#include <tuple>

#include "planted.hpp"
#include "tempus/error.hpp"
#include "tempus/lexicon.hpp"
#include "tempus/segmentation.hpp"
#include "tempus/text.hpp"

using namespace tempus;
using namespace tempus::lexicon;

TEST_CASE("shipped lexicon") {
  const auto& lex = Lexicon::builtin();
  CHECK(lex.size() == 80);
  for (std::size_t i = 0; i < kCategories.size(); ++i) CHECK(lex.category_size(kCategories[i]) == kReferenceSizes[i]);
  REQUIRE(lex.find("abruptly"));
  CHECK(lex.find("abruptly")->category == Category::ImmediacySuddenness);
  REQUIRE(lex.find("simultaneously"));
  CHECK(lex.find("simultaneously")->category == Category::Overlap);
  CHECK(lex.find("yesterday")->subgroup == "Past");
  CHECK(lex.find("now")->subgroup == "Present");
  CHECK(lex.find("shortly")->category == Category::DurationTimeBlindness);
  CHECK(lex.find("Abruptly") == nullptr);  // lookups take normalized forms
}

TEST_CASE("lexicon validation") {
  CHECK_THROWS_AS(Lexicon::parse("adverb,category,subgroup\nfoo,Nope,\n"), Error);
  CHECK_THROWS_AS(Lexicon::parse("adverb,category,subgroup\nfoo,Pace,\nfoo,Pace,\n", Shape::Any), Error);
  CHECK_THROWS_AS(Lexicon::parse("adverb,category,subgroup\nfoo,Pace,\n"), Error);  // wrong counts
  CHECK_THROWS_AS(Lexicon::parse("word,cat\nfoo,Pace\n", Shape::Any), Error);
  auto small = Lexicon::parse("adverb,category,subgroup\nFoo,Pace,\n", Shape::Any);
  CHECK(small.contains("foo"));
}

TEST_CASE("whole-token matching") {
  seg::Segmenter segmenter;
  CHECK(match_occurrences(seg::segment("It ended abruptly.", "b", segmenter), Lexicon::builtin()).size() == 1);
  CHECK(match_occurrences(seg::segment("Abruptness is hard.", "b", segmenter), Lexicon::builtin()).empty());
}

TEST_CASE("planted adverbs") {
  seg::Segmenter segmenter;
  const auto book = seg::segment(planted::kAdverbText, "planted", segmenter);
  REQUIRE(book.sentences.size() == 8);
  auto occs = match_occurrences(book, Lexicon::builtin());
  assign_occurrence_ids(occs);
  REQUIRE(occs.size() == planted::kAdverbs.size());
  for (std::size_t i = 0; i < occs.size(); ++i) {
    const auto& o = occs[i];
    CAPTURE(i);
    CHECK(o.occurrence_id == i + 1);
    CHECK(o.sentence_index == planted::kAdverbs[i].sentence);
    CHECK(o.token_begin == planted::kAdverbs[i].token);
    CHECK(o.token_end == planted::kAdverbs[i].token + 1);
    CHECK(o.expression == planted::kAdverbs[i].adverb);
    CHECK(o.matched_surface == planted::kAdverbs[i].surface);
    const auto& sentence = book.sentences[o.sentence_index].text;
    CHECK(sentence.substr(o.char_span.begin, o.char_span.size()) == o.matched_surface);
    CHECK(seg::normalize_token(o.matched_surface) == o.expression);
  }

  const auto counts = category_counts(occs, Lexicon::builtin());
  CHECK(counts.total_mentions == 12);
  CHECK(counts.unique_adverbs == 12);
  CHECK(counts.absent_adverbs.size() == 68);
  const auto& per_category = planted::kAdverbCategoryCounts;
  std::size_t sum = 0;
  for (std::size_t i = 0; i < 6; ++i) {
    CHECK(counts.categories[i].total_mentions == per_category[i]);
    sum += counts.categories[i].total_mentions;
  }
  CHECK(sum == counts.total_mentions);
}

TEST_CASE("category counts on an empty corpus") {
  const auto counts = category_counts({}, Lexicon::builtin());
  CHECK(counts.total_mentions == 0);
  CHECK(counts.unique_adverbs == 0);
  CHECK(counts.absent_adverbs.size() == 80);
}

TEST_CASE("pos filter hook can veto matches") {
  seg::Segmenter segmenter;
  const auto book = seg::segment("It is still raining. Still, we left later.", "b", segmenter);
  CHECK(match_occurrences(book, Lexicon::builtin()).size() == 3);
  PosFilter no_still = [](const seg::Sentence&, const std::vector<seg::Token>& toks, std::size_t i) {
    return toks[i].normalized != "still";
  };
  CHECK(match_occurrences(book, Lexicon::builtin(), no_still).size() == 1);
}

TEST_CASE("occurrence ids follow document order whatever the input order") {
  seg::Segmenter segmenter;
  auto a = match_occurrences(seg::segment("Now and then. Soon.", "b", segmenter), Lexicon::builtin());
  auto b = match_occurrences(seg::segment("Always.", "a", segmenter), Lexicon::builtin());
  std::vector<Occurrence> x = a, y = b;
  x.insert(x.end(), b.begin(), b.end());
  y.insert(y.end(), a.begin(), a.end());
  assign_occurrence_ids(x);
  assign_occurrence_ids(y);
  REQUIRE(x.size() == 4);
  for (std::size_t i = 0; i < x.size(); ++i) {
    CHECK(to_json(x[i]) == to_json(y[i]));
    CHECK(occurrence_from_json(to_json(x[i])).char_span == x[i].char_span);
  }
  CHECK(x[0].source_id == "a");
}
