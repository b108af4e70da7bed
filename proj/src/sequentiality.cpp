#include "tempus/sequentiality.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <thread>

#include "tempus/error.hpp"

namespace tempus::sequentiality {

std::optional<Story> build_story(const std::string& source_id, const std::string& topic,
                                 const std::vector<seg::Sentence>& sentences, std::size_t length,
                                 SkippedBook* skipped) {
  if (length < 2) throw Error(ErrorKind::Validation, "story length must be at least 2");
  if (sentences.size() < 2) {
    if (skipped) *skipped = {source_id, "fewer than two sentences"};
    return std::nullopt;
  }
  Story story;
  story.source_id = source_id;
  story.topic = topic;
  const auto n = std::min(length, sentences.size());
  for (std::size_t i = 0; i < n; ++i) story.sentences.push_back(sentences[i].text);
  story.short_story = n < length;
  return story;
}

double sentence_nll(backend::LogProbBackend& backend, const std::string& context, const std::string& sentence) {
  if (text::trim(sentence).empty()) throw Error(ErrorKind::Validation, "cannot score an empty sentence");
  const auto lp = backend.logprobs(context, sentence);
  if (lp.logprobs.empty()) throw Error(ErrorKind::Backend, "backend returned no tokens for a non-empty sentence");
  double sum = 0;
  for (double v : lp.logprobs) sum += v;
  return -(sum / static_cast<double>(lp.logprobs.size()));
}

double NllScorer::nll(const std::string& context, const std::string& sentence) {
  auto key = std::make_pair(context, sentence);
  {
    std::lock_guard lock(mutex_);
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;
  }
  const double v = sentence_nll(backend_, context, sentence);
  std::lock_guard lock(mutex_);
  ++calls_;
  memo_.emplace(std::move(key), v);
  return v;
}

std::size_t NllScorer::backend_calls() const {
  std::lock_guard lock(mutex_);
  return calls_;
}

namespace {

std::string with_topic(const std::string& topic, const std::string& history) {
  if (topic.empty()) return history;
  if (history.empty()) return topic;
  return topic + " " + history;
}

}  // namespace

double sequentiality_at(const Story& story, std::size_t history, NllScorer& scorer, const Options& options) {
  const auto& s = story.sentences;
  if (s.size() < 2) throw Error(ErrorKind::Validation, "story " + story.source_id + " is too short");
  if (history == 0) throw Error(ErrorKind::Validation, "history size must be at least 1");

  double sum = 0;
  std::size_t terms = 0;
  if (options.include_first_sentence) ++terms;
  // Zero-based i here is the one-based sentence i + 1.
  for (std::size_t i = 1; i < s.size(); ++i) {
    const std::size_t first = history >= i ? 0 : i - history;
    std::string joined;
    for (std::size_t k = first; k < i; ++k) {
      if (!joined.empty()) joined.push_back(' ');
      joined += s[k];
    }
    const double topic_only = scorer.nll(story.topic, s[i]);
    const double with_history = scorer.nll(with_topic(story.topic, joined), s[i]);
    sum += topic_only - with_history;
    ++terms;
  }
  return sum / static_cast<double>(terms);
}

SequentialityCurve sweep_history(const std::vector<Story>& stories, NllScorer& scorer, const Options& options,
                                 std::size_t concurrency, std::size_t max_history) {
  if (stories.empty()) throw Error(ErrorKind::Validation, "no valid stories to sweep");
  std::size_t longest = 0;
  for (const auto& st : stories) longest = std::max(longest, st.sentences.size());
  std::size_t top = longest - 1;
  if (max_history > 0) top = std::min(top, max_history);

  SequentialityCurve curve;
  for (std::size_t h = 1; h <= top; ++h) curve.history_sizes.push_back(h);
  curve.history_sizes.push_back(kFullHistory);
  curve.per_story.assign(stories.size(), std::vector<double>(curve.history_sizes.size(), 0.0));
  for (const auto& st : stories) curve.story_ids.push_back(st.source_id);

  std::atomic<std::size_t> next{0};
  std::exception_ptr first_error;
  std::mutex error_mutex;
  auto work = [&] {
    for (;;) {
      const auto i = next.fetch_add(1);
      if (i >= stories.size()) return;
      try {
        for (std::size_t k = 0; k < curve.history_sizes.size(); ++k) {
          curve.per_story[i][k] = sequentiality_at(stories[i], curve.history_sizes[k], scorer, options);
        }
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!first_error) first_error = std::current_exception();
        return;
      }
    }
  };
  const std::size_t workers = std::clamp<std::size_t>(concurrency, 1, stories.size());
  std::vector<std::thread> threads;
  for (std::size_t t = 1; t < workers; ++t) threads.emplace_back(work);
  work();
  for (auto& t : threads) t.join();
  if (first_error) std::rethrow_exception(first_error);

  for (std::size_t k = 0; k < curve.history_sizes.size(); ++k) {
    double sum = 0;
    for (const auto& row : curve.per_story) sum += row[k];
    curve.mean.push_back(sum / static_cast<double>(stories.size()));
  }
  return curve;
}

std::string history_label(std::size_t h) { return h == kFullHistory ? "full" : std::to_string(h); }

}  // namespace tempus::sequentiality
