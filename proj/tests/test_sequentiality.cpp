#include <doctest.h>

#include <random>

#include "support.hpp"
#include "tempus/error.hpp"
#include "tempus/sequentiality.hpp"

using namespace tempus;
using namespace tempus::sequentiality;

namespace {

std::vector<seg::Sentence> sentences_of(const std::vector<std::string>& texts) {
  std::vector<seg::Sentence> out;
  for (std::size_t i = 0; i < texts.size(); ++i) out.push_back({"b", i, {}, texts[i]});
  return out;
}

Story story(std::vector<std::string> s, std::string topic = "") {
  Story st;
  st.source_id = "b";
  st.topic = std::move(topic);
  st.sentences = std::move(s);
  return st;
}

}  // namespace

TEST_CASE("sentence nll with the stub") {
  backend::StubBackend be;
  CHECK(sentence_nll(be, "", "a b") == 2.0);
  CHECK(sentence_nll(be, "A B", "a b") == 1.0);
  CHECK(sentence_nll(be, "a b", "a b c") == doctest::Approx(4.0 / 3.0).epsilon(1e-15));
  CHECK_THROWS_AS(sentence_nll(be, "x", "   "), Error);
}

TEST_CASE("repeated and disjoint stories") {
  backend::StubBackend be;
  NllScorer scorer(be);
  const auto same = story({"x y", "x y", "x y", "x y"}, "topic");
  CHECK(sequentiality_at(same, 1, scorer) == 1.0);
  CHECK(sequentiality_at(same, kFullHistory, scorer) == 1.0);
  const auto apart = story({"a b", "c d", "e f", "g h"}, "topic");
  CHECK(sequentiality_at(apart, 1, scorer) == 0.0);
  CHECK(sequentiality_at(apart, kFullHistory, scorer) == 0.0);
}

TEST_CASE("three sentence story by hand") {
  // topic-only NLLs: s2 = 2, s3 = 7/4
  // h = 1: s2 given s1 = 5/3, s3 given s2 = 6/4
  // full:  s3 given s1 s2 = 5/4
  backend::StubBackend be;
  NllScorer scorer(be);
  const auto st = story({"the sea was calm", "the boat left", "calm boat and sea"}, "sea");
  CHECK(std::fabs(sequentiality_at(st, 1, scorer) - 7.0 / 24.0) < 1e-12);
  CHECK(std::fabs(sequentiality_at(st, kFullHistory, scorer) - 5.0 / 12.0) < 1e-12);
  CHECK(sequentiality_at(st, 2, scorer) == sequentiality_at(st, kFullHistory, scorer));
  CHECK(std::fabs(sequentiality_at(st, 1, scorer, {.include_first_sentence = true}) - 7.0 / 36.0) < 1e-12);
  CHECK(scorer.backend_calls() == 5);
  CHECK_THROWS_AS(sequentiality_at(st, 0, scorer), Error);
}

TEST_CASE("two sentence story") {
  backend::StubBackend be;
  NllScorer scorer(be);
  const auto curve = sweep_history({story({"one two", "two three"}, "t")}, scorer);
  REQUIRE(curve.history_sizes.size() == 2);
  CHECK(curve.history_sizes[0] == 1);
  CHECK(curve.history_sizes[1] == kFullHistory);
  CHECK(curve.mean[0] == curve.mean[1]);
  CHECK(curve.mean[0] == 0.5);
  CHECK(history_label(kFullHistory) == "full");
  CHECK(history_label(3) == "3");
}

TEST_CASE("more history never lowers sequentiality under the stub") {
  auto rng = support::rng(50);
  const std::vector<std::string> vocab = {"a", "b", "c", "d", "e", "f", "g", "h", "i", "j", "k", "l"};
  std::uniform_int_distribution<std::size_t> word(0, vocab.size() - 1), len(1, 6), count(2, 9);
  std::vector<Story> stories;
  for (int t = 0; t < 50; ++t) {
    std::vector<std::string> ss(count(rng));
    for (auto& s : ss) {
      const auto n = len(rng);
      for (std::size_t k = 0; k < n; ++k) s += (k ? " " : "") + vocab[word(rng)];
    }
    stories.push_back(story(ss, vocab[word(rng)]));
    stories.back().source_id = "s" + std::to_string(t);
  }
  backend::StubBackend be;
  NllScorer scorer(be);
  const auto curve = sweep_history(stories, scorer, {}, 4);
  for (const auto& row : curve.per_story) {
    for (std::size_t k = 1; k < row.size(); ++k) CHECK(row[k] >= row[k - 1] - 1e-15);
  }
  for (std::size_t k = 1; k < curve.mean.size(); ++k) CHECK(curve.mean[k] >= curve.mean[k - 1] - 1e-15);

  const auto calls = scorer.backend_calls();
  const auto again = sweep_history(stories, scorer, {}, 2);
  CHECK(scorer.backend_calls() == calls);  // everything memoized
  CHECK(again.mean == curve.mean);

  const auto capped = sweep_history(stories, scorer, {}, 4, 3);
  CHECK(capped.history_sizes.size() == 4);
  CHECK(capped.mean.back() == curve.mean.back());
}

TEST_CASE("story construction") {
  std::vector<std::string> thirty;
  for (int i = 0; i < 30; ++i) thirty.push_back("sentence number " + std::to_string(i));
  auto st = build_story("b", "topic", sentences_of(thirty));
  REQUIRE(st);
  CHECK(st->sentences.size() == 18);
  CHECK(st->sentences.back() == "sentence number 17");
  CHECK_FALSE(st->short_story);

  auto ten = build_story("b", "topic", sentences_of({thirty.begin(), thirty.begin() + 10}));
  REQUIRE(ten);
  CHECK(ten->sentences.size() == 10);
  CHECK(ten->short_story);

  SkippedBook skipped;
  CHECK_FALSE(build_story("tiny", "t", sentences_of({"Only one."}), 18, &skipped));
  CHECK(skipped.source_id == "tiny");
  CHECK_FALSE(skipped.reason.empty());
  CHECK_THROWS_AS(build_story("b", "t", sentences_of(thirty), 1), Error);
}
