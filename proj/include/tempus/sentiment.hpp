#pragma once

#include <atomic>
#include <filesystem>
#include <optional>
#include <shared_mutex>
#include <string>
#include <unordered_map>
#include <vector>

#include <json.hpp>

#include "tempus/backend.hpp"
#include "tempus/context.hpp"
#include "tempus/lexicon.hpp"
#include "tempus/stats.hpp"

namespace tempus::sentiment {

using backend::PolaritySimplex;

// Content-addressed cache of backend scores. With a directory, entries are
// persisted as <dir>/<hh>/<hash>.json; otherwise memory only. Concurrent
// readers, serialized writers.
class ScoreCache {
 public:
  explicit ScoreCache(std::filesystem::path dir = {});

  static std::string key_for(std::string_view model_id, const context::ContextWindow& window);

  std::optional<PolaritySimplex> get(const std::string& key);
  void put(const std::string& key, const PolaritySimplex& value);

  std::size_t hits() const { return hits_; }
  std::size_t misses() const { return misses_; }

 private:
  std::filesystem::path entry_path(const std::string& key) const;

  std::filesystem::path dir_;
  mutable std::shared_mutex mutex_;
  std::unordered_map<std::string, PolaritySimplex> memory_;
  std::atomic<std::size_t> hits_{0};
  std::atomic<std::size_t> misses_{0};
};

// Cached, validated score for one window. A backend simplex that violates
// the 1e-6 sum constraint is rejected, not renormalized.
PolaritySimplex score_window(const context::ContextWindow& window, backend::SentimentBackend& backend,
                             ScoreCache& cache);

struct WindowScore {
  Group group = Group::Lexicon;
  std::uint64_t occurrence_id = 0;
  PolaritySimplex simplex;
  std::string model_id;
};

// Scores every window with at most `concurrency` requests in flight. The
// result is sorted by (group, occurrence_id).
std::vector<WindowScore> score_all(const std::vector<context::ContextWindow>& windows,
                                   backend::SentimentBackend& backend, ScoreCache& cache,
                                   std::size_t concurrency = 8);

nlohmann::json to_json(const WindowScore& s);
WindowScore score_from_json(const nlohmann::json& j);

struct ScoredOccurrence {
  Group group = Group::Lexicon;
  std::string expression;
  std::string category;  // lexicon group only
  std::uint64_t occurrence_id = 0;
  PolaritySimplex simplex;
};

struct ExpressionSentiment {
  std::string expression;
  Group group = Group::Lexicon;
  std::string category;
  std::size_t n_occurrences = 0;
  double mean_negative = 0;
  double mean_neutral = 0;
  double mean_positive = 0;
};

// Per-expression means, sorted by (group, expression). Summation order is
// fixed by occurrence_id, so the result is independent of input order.
std::vector<ExpressionSentiment> aggregate_expression(std::vector<ScoredOccurrence> scores);

enum class Weighting { Unweighted, Occurrence };
std::string_view weighting_name(Weighting w);
std::optional<Weighting> parse_weighting(std::string_view name);

struct CategorySentiment {
  lexicon::Category category;
  std::size_t n_expressions = 0;
  std::size_t n_occurrences = 0;
  double mean_negative = 0;
  double mean_neutral = 0;
  double mean_positive = 0;
};

struct CategoryAggregate {
  std::vector<CategorySentiment> categories;  // non-empty categories, canonical order
  std::vector<lexicon::Category> empty;
};

// Uses lexicon-group expressions only.
CategoryAggregate aggregate_category(const std::vector<ExpressionSentiment>& expressions,
                                     Weighting weighting = Weighting::Unweighted);

enum class Polarity { Negative, Neutral, Positive };
inline constexpr Polarity kPolarities[] = {Polarity::Negative, Polarity::Neutral, Polarity::Positive};
std::string_view polarity_name(Polarity p);
double polarity_value(const ExpressionSentiment& e, Polarity p);
double polarity_value(const PolaritySimplex& s, Polarity p);
std::vector<double> polarity_values(const std::vector<ExpressionSentiment>& es, Polarity p);

struct PolarityComparison {
  Polarity polarity;
  double mean_lexicon = 0;
  double mean_control = 0;
  stats::TestReport welch;
};

// Welch's t per polarity over expression-level means (lexicon minus control).
std::vector<PolarityComparison> compare_groups(const std::vector<ExpressionSentiment>& lexicon_group,
                                               const std::vector<ExpressionSentiment>& control_group);

enum class Side { Low, High };

struct Outlier {
  std::string expression;
  double value = 0;
  Side side = Side::High;
};

// Values outside the IQR fences; requires at least four expressions. Sorted
// by descending distance from the median, then expression.
std::vector<Outlier> find_outliers(const std::vector<ExpressionSentiment>& expressions, Polarity polarity);

}  // namespace tempus::sentiment
