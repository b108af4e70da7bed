#pragma once

#include <cstddef>
#include <limits>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "tempus/backend.hpp"
#include "tempus/segmentation.hpp"

namespace tempus::sequentiality {

struct Story {
  std::string source_id;
  std::string topic;
  std::vector<std::string> sentences;
  bool short_story = false;  // fewer sentences than requested
};

struct SkippedBook {
  std::string source_id;
  std::string reason;
};

// First min(length, available) sentences of the book. Books with fewer than
// two sentences cannot form a story.
std::optional<Story> build_story(const std::string& source_id, const std::string& topic,
                                 const std::vector<seg::Sentence>& sentences, std::size_t length = 18,
                                 SkippedBook* skipped = nullptr);

// Mean per-token negative log-probability (nats) of `sentence` given `context`.
double sentence_nll(backend::LogProbBackend& backend, const std::string& context, const std::string& sentence);

// Thread-safe memo of sentence_nll keyed by (context, sentence), shared across
// history sizes.
class NllScorer {
 public:
  explicit NllScorer(backend::LogProbBackend& backend) : backend_(backend) {}

  double nll(const std::string& context, const std::string& sentence);
  std::size_t backend_calls() const;

 private:
  backend::LogProbBackend& backend_;
  mutable std::mutex mutex_;
  std::map<std::pair<std::string, std::string>, double> memo_;
  std::size_t calls_ = 0;
};

inline constexpr std::size_t kFullHistory = std::numeric_limits<std::size_t>::max();

struct Options {
  // Include the first sentence, whose difference is identically zero.
  bool include_first_sentence = false;
};

// Mean over sentences i >= 2 of NLL(s_i | topic) - NLL(s_i | topic + previous
// `history` sentences). Pass kFullHistory for the whole preceding story.
double sequentiality_at(const Story& story, std::size_t history, NllScorer& scorer,
                        const Options& options = {});

struct SequentialityCurve {
  std::vector<std::size_t> history_sizes;  // 1..max, then kFullHistory
  std::vector<double> mean;                // per history size
  std::vector<std::string> story_ids;
  std::vector<std::vector<double>> per_story;  // [story][history index]
};

// Sweeps history from 1 to (longest story - 1), capped by `max_history` when
// non-zero, plus full. Stories shorter than a given history contribute their
// full-history value.
SequentialityCurve sweep_history(const std::vector<Story>& stories, NllScorer& scorer,
                                 const Options& options = {}, std::size_t concurrency = 8,
                                 std::size_t max_history = 0);

std::string history_label(std::size_t h);

}  // namespace tempus::sequentiality
