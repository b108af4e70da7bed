#pragma once

#include <array>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "tempus/backend.hpp"
#include "tempus/sentiment.hpp"

namespace tempus::pipeline {

namespace fs = std::filesystem;

inline constexpr std::array<std::string_view, 9> kStages = {
    "ingest", "stats", "match", "tag-times", "contexts", "score", "analyze", "sequentiality", "tate",
};

struct RunConfig {
  fs::path workspace = ".";
  bool stub = false;
  std::string backend_url;
  long long min_count = 50;
  std::size_t story_length = 18;
  std::size_t max_history = 0;  // 0: up to the longest story
  std::size_t concurrency = 8;
  sentiment::Weighting weighting = sentiment::Weighting::Unweighted;
  bool include_first_sentence = false;
  std::string topic;   // replaces the book title as story topic when set
  fs::path metadata;   // default: <workspace>/metadata.json

  // Throws Validation on inconsistent settings.
  void validate() const;
  fs::path metadata_path() const;
};

// Deliberately leaves out the workspace path, so two workspaces fed the same
// inputs end up byte-identical.
nlohmann::json to_json(const RunConfig& config);

// Test hook: pre-built backends. When null, one is made from the config.
struct Backends {
  backend::SentimentBackend* sentiment = nullptr;
  backend::LogProbBackend* logprob = nullptr;
};

struct StageReport {
  std::string stage;
  std::vector<std::string> artifacts;  // workspace-relative
  nlohmann::json details = nlohmann::json::object();
};

bool is_stage(std::string_view name);

StageReport run_stage(std::string_view stage, const RunConfig& config, Backends backends = {});

// Every stage in order.
std::vector<StageReport> run_all(const RunConfig& config, Backends backends = {});

// Writes summary.json and the reports/ tables from persisted artifacts.
// Called by the analyze stage.
StageReport emit_reports(const RunConfig& config);

nlohmann::json to_json(const StageReport& report);

// Workspace file names.
namespace artifact {
inline constexpr std::string_view kRunConfig = "run_config.json";
inline constexpr std::string_view kManifest = "corpus/manifest.json";
inline constexpr std::string_view kCorpusStats = "corpus/corpus_stats.json";
inline constexpr std::string_view kOccurrences = "occurrences.jsonl";
inline constexpr std::string_view kTimeOccurrences = "time_occurrences.jsonl";
inline constexpr std::string_view kControlGroup = "control_group.json";
inline constexpr std::string_view kWindows = "windows.jsonl";
inline constexpr std::string_view kScores = "scores.jsonl";
inline constexpr std::string_view kSentimentCache = "cache/sentiment";
inline constexpr std::string_view kSummary = "summary.json";
inline constexpr std::string_view kCategorySentiment = "reports/category_sentiment.csv";
inline constexpr std::string_view kSentimentDistribution = "reports/sentiment_distribution.csv";
inline constexpr std::string_view kCategoryFrequency = "reports/category_frequency.csv";
inline constexpr std::string_view kOutliers = "reports/outliers.csv";
inline constexpr std::string_view kExpressionSentiment = "reports/expression_sentiment.csv";
inline constexpr std::string_view kSequentiality = "sequentiality.csv";
inline constexpr std::string_view kSequentialitySummary = "sequentiality_summary.json";
inline constexpr std::string_view kSequentialityCurve = "reports/sequentiality_curve.csv";
inline constexpr std::string_view kTateResponses = "tate_responses.csv";
inline constexpr std::string_view kTateGroups = "tate_groups.csv";
inline constexpr std::string_view kTateScores = "tate_scores.csv";
inline constexpr std::string_view kTateComparisons = "tate_comparisons.json";
// Optional overrides of the built-in data.
inline constexpr std::string_view kLexicon = "lexicon.csv";
inline constexpr std::string_view kAbbreviations = "abbreviations.txt";
inline constexpr std::string_view kTimeGrammar = "time_grammar.tsv";
inline constexpr std::string_view kTateItems = "tate_items.csv";
}  // namespace artifact

}  // namespace tempus::pipeline
