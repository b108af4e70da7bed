#include <doctest.h>

#include <map>

#include "tempus/context.hpp"
#include "tempus/error.hpp"
#include "tempus/lexicon.hpp"
#include "tempus/segmentation.hpp"

using namespace tempus;
using namespace tempus::context;

namespace {

// Two adverbs in the first sentence, two in the last, eight in between.
constexpr std::string_view kBook =
    "Suddenly and abruptly it began. It was now raining. Soon it was later. Then it was always dark. "
    "Yet we never slept. It rained still. Eventually and lastly it stopped.";

struct Fixture {
  seg::SegmentedText book;
  std::vector<Occurrence> occs;
  SentenceIndex index;
  Fixture() {
    seg::Segmenter segmenter;
    book = seg::segment(kBook, "b", segmenter);
    occs = lexicon::match_occurrences(book, lexicon::Lexicon::builtin());
    assign_occurrence_ids(occs);
    index.emplace("b", book.sentences);
  }
};

}  // namespace

TEST_CASE("window kinds at book boundaries") {
  Fixture f;
  REQUIRE(f.book.sentences.size() == 7);
  REQUIRE(f.occs.size() == 12);
  const auto windows = extract_all(f.occs, f.index);
  REQUIRE(windows.size() == f.occs.size());
  std::map<WindowKind, int> kinds;
  for (const auto& w : windows) {
    ++kinds[w.kind];
    CHECK(w.aspect_round_trips());
  }
  CHECK(kinds[WindowKind::Triplet] == 8);
  CHECK(kinds[WindowKind::PairTrailing] == 2);
  CHECK(kinds[WindowKind::PairLeading] == 2);
  CHECK(kinds[WindowKind::Degenerate] == 0);

  const auto& s = f.book.sentences;
  // First sentence: containing + following.
  CHECK(windows[0].text == s[0].text + " " + s[1].text);
  // Two hits in one sentence: same text, different aspects.
  CHECK(windows[0].text == windows[1].text);
  CHECK(windows[0].aspect_span != windows[1].aspect_span);
  CHECK(windows[0].aspect_surface == "Suddenly");
  CHECK(windows[1].aspect_surface == "abruptly");
  // Sentence 2 of 7: triplet 1,2,3.
  CHECK(windows[3].kind == WindowKind::Triplet);
  CHECK(windows[3].text == s[1].text + " " + s[2].text + " " + s[3].text);
  // Last sentence: preceding + containing, aspect shifted into window coordinates.
  const auto& last = windows.back();
  CHECK(last.kind == WindowKind::PairLeading);
  CHECK(last.text == s[5].text + " " + s[6].text);
  CHECK(last.aspect_span.begin == s[5].text.size() + 1 + f.occs.back().char_span.begin);
  CHECK(last.aspect_surface == "lastly");
}

TEST_CASE("single-sentence book gives a degenerate window") {
  seg::Segmenter segmenter;
  auto book = seg::segment("She left suddenly.", "one", segmenter);
  auto occs = lexicon::match_occurrences(book, lexicon::Lexicon::builtin());
  REQUIRE(occs.size() == 1);
  auto w = extract_window(occs[0], book.sentences);
  CHECK(w.kind == WindowKind::Degenerate);
  CHECK(w.text == "She left suddenly.");
  CHECK(w.aspect_round_trips());
}

TEST_CASE("dangling references are errors") {
  Fixture f;
  auto occ = f.occs[0];
  occ.sentence_index = 99;
  CHECK_THROWS_AS(extract_all({occ}, f.index), Error);
  occ = f.occs[0];
  occ.source_id = "elsewhere";
  CHECK_THROWS_AS(extract_all({occ}, f.index), Error);
  occ = f.occs[0];
  occ.char_span = {0, 1000};
  CHECK_THROWS_AS(extract_window(occ, f.book.sentences), Error);
  CHECK(extract_all({}, f.index).empty());
}

TEST_CASE("window json round trip") {
  Fixture f;
  for (const auto& w : extract_all(f.occs, f.index)) {
    const auto back = window_from_json(to_json(w));
    CHECK(back.text == w.text);
    CHECK(back.aspect_span == w.aspect_span);
    CHECK(back.kind == w.kind);
    CHECK(back.group == w.group);
    CHECK(back.occurrence_id == w.occurrence_id);
    CHECK(to_json(back) == to_json(w));
  }
  CHECK(parse_kind("pair-leading") == WindowKind::PairLeading);
  CHECK_THROWS_AS(parse_kind("quad"), Error);
}
