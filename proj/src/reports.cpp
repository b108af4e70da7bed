#include <algorithm>
#include <map>
#include <set>
#include <tuple>

#include "tempus/context.hpp"
#include "tempus/csv.hpp"
#include "tempus/error.hpp"
#include "tempus/io.hpp"
#include "tempus/lexicon.hpp"
#include "tempus/pipeline.hpp"
#include "tempus/sentiment.hpp"
#include "tempus/stats.hpp"
#include "tempus/text.hpp"
#include "workspace.hpp"

namespace tempus::pipeline {

using nlohmann::json;
using sentiment::ExpressionSentiment;
using sentiment::Polarity;

namespace {

using Key = std::pair<Group, std::uint64_t>;

std::string num(double v) { return text::format_double(v); }

std::vector<ExpressionSentiment> only(const std::vector<ExpressionSentiment>& es, Group g) {
  std::vector<ExpressionSentiment> out;
  std::copy_if(es.begin(), es.end(), std::back_inserter(out), [g](const auto& e) { return e.group == g; });
  return out;
}

// Distribution rows and the matching summary block for one group.
json distribution(const std::vector<ExpressionSentiment>& es, Group g, std::string& rows) {
  json out = json::object();
  if (es.empty()) return out;
  for (auto p : sentiment::kPolarities) {
    const auto values = sentiment::polarity_values(es, p);
    const auto d = stats::describe(values);
    std::string low, high;
    json block = stats::to_json(d);
    if (values.size() >= 4) {
      const auto f = stats::iqr_fences(values);
      low = num(f.low);
      high = num(f.high);
      block["low_fence"] = f.low;
      block["high_fence"] = f.high;
    }
    rows += csv::format_row({std::string(group_name(g)), std::string(sentiment::polarity_name(p)),
                             std::to_string(d.n), num(d.min), num(d.q1), num(d.median), num(d.q3), num(d.max),
                             num(d.iqr), num(d.mean), d.sd_defined ? num(d.sd) : "", low, high});
    out[std::string(sentiment::polarity_name(p))] = block;
  }
  return out;
}

}  // namespace

StageReport emit_reports(const RunConfig& config) {
  Workspace ws(config.workspace);
  // Scores first: that is the artifact a premature analyze is missing.
  const auto scores_path = ws.require(artifact::kScores);
  const auto windows_path = ws.require(artifact::kWindows);
  const auto occurrences_path = ws.require(artifact::kOccurrences);
  const auto control_path = ws.require(artifact::kControlGroup);

  std::map<Key, context::ContextWindow> windows;
  for (const auto& j : io::read_jsonl(windows_path)) {
    auto w = context::window_from_json(j);
    Key k{w.group, w.occurrence_id};
    if (!windows.emplace(k, std::move(w)).second) {
      fail(ErrorKind::Validation, "windows.jsonl lists occurrence " + std::to_string(k.second) + " twice");
    }
  }
  std::vector<sentiment::WindowScore> scores;
  for (const auto& j : io::read_jsonl(scores_path)) scores.push_back(sentiment::score_from_json(j));
  std::vector<Occurrence> lexicon_occs;
  for (const auto& j : io::read_jsonl(occurrences_path)) lexicon_occs.push_back(occurrence_from_json(j));
  const auto control_doc = io::read_json(control_path);

  if (scores.size() != windows.size()) {
    fail(ErrorKind::Validation, "scores.jsonl has " + std::to_string(scores.size()) + " records but windows.jsonl has " +
                                    std::to_string(windows.size()) + "; rerun the score stage");
  }
  std::map<std::uint64_t, std::string> category_of;
  for (const auto& o : lexicon_occs) category_of[o.occurrence_id] = o.category;

  std::set<std::string> model_ids;
  std::vector<sentiment::ScoredOccurrence> scored;
  std::map<Key, const sentiment::WindowScore*> score_of;
  std::size_t lexicon_windows = 0, control_windows = 0;
  for (const auto& s : scores) {
    auto w = windows.find({s.group, s.occurrence_id});
    if (w == windows.end()) {
      fail(ErrorKind::Validation, "score for " + std::string(group_name(s.group)) + " occurrence " +
                                      std::to_string(s.occurrence_id) + " has no window");
    }
    if (!s.simplex.is_valid()) {
      fail(ErrorKind::Validation, "persisted score for occurrence " + std::to_string(s.occurrence_id) +
                                      " is not a valid simplex");
    }
    std::string category;
    if (s.group == Group::Lexicon) {
      auto c = category_of.find(s.occurrence_id);
      if (c == category_of.end()) {
        fail(ErrorKind::Validation, "lexicon occurrence " + std::to_string(s.occurrence_id) +
                                        " is missing from occurrences.jsonl");
      }
      category = c->second;
      ++lexicon_windows;
    } else {
      ++control_windows;
    }
    model_ids.insert(s.model_id);
    score_of[{s.group, s.occurrence_id}] = &s;
    scored.push_back({s.group, w->second.expression, category, s.occurrence_id, s.simplex});
  }

  const auto expressions = sentiment::aggregate_expression(scored);
  const auto lex = only(expressions, Group::Lexicon);
  const auto ctl = only(expressions, Group::Control);
  auto& lexicon = ws.lexicon();
  StageReport report{"analyze", {}, {}};
  auto emit = [&](std::string_view rel, const std::string& content) {
    io::write_file_atomic(ws.path(rel), content);
    report.artifacts.emplace_back(rel);
  };

  // Per-expression means.
  std::string rows = csv::format_row(
      {"group", "expression", "category", "n_occurrences", "mean_negative", "mean_neutral", "mean_positive"});
  for (const auto& e : expressions) {
    rows += csv::format_row({std::string(group_name(e.group)), e.expression, e.category,
                             std::to_string(e.n_occurrences), num(e.mean_negative), num(e.mean_neutral),
                             num(e.mean_positive)});
  }
  emit(artifact::kExpressionSentiment, rows);

  // Category means.
  const auto categories = sentiment::aggregate_category(expressions, config.weighting);
  rows = csv::format_row(
      {"category", "n_expressions", "n_occurrences", "mean_negative", "mean_neutral", "mean_positive"});
  json category_json = json::array();
  for (const auto& c : categories.categories) {
    const std::string name(lexicon::category_name(c.category));
    rows += csv::format_row({name, std::to_string(c.n_expressions), std::to_string(c.n_occurrences),
                             num(c.mean_negative), num(c.mean_neutral), num(c.mean_positive)});
    category_json.push_back({{"category", name},
                             {"n_expressions", c.n_expressions},
                             {"n_occurrences", c.n_occurrences},
                             {"mean_negative", c.mean_negative},
                             {"mean_neutral", c.mean_neutral},
                             {"mean_positive", c.mean_positive}});
  }
  json empty_categories = json::array();
  for (auto c : categories.empty) empty_categories.push_back(lexicon::category_name(c));
  emit(artifact::kCategorySentiment, rows);

  // Box-plot summaries.
  rows = csv::format_row({"group", "polarity", "n", "min", "q1", "median", "q3", "max", "iqr", "mean", "sd",
                          "low_fence", "high_fence"});
  json descriptives;
  descriptives["lexicon"] = distribution(lex, Group::Lexicon, rows);
  descriptives["control"] = distribution(ctl, Group::Control, rows);
  emit(artifact::kSentimentDistribution, rows);

  // Lexical diversity and usage frequency.
  const auto counts = lexicon::category_counts(lexicon_occs, lexicon);
  rows = csv::format_row({"category", "lexicon_size", "unique_adverbs", "total_mentions", "share_of_mentions"});
  json frequency = json::array();
  for (const auto& t : counts.categories) {
    const double share = counts.total_mentions
                             ? static_cast<double>(t.total_mentions) / static_cast<double>(counts.total_mentions)
                             : 0.0;
    const std::string name(lexicon::category_name(t.category));
    rows += csv::format_row({name, std::to_string(t.lexicon_size), std::to_string(t.unique_adverbs),
                             std::to_string(t.total_mentions), num(share)});
    frequency.push_back({{"category", name},
                         {"lexicon_size", t.lexicon_size},
                         {"unique_adverbs", t.unique_adverbs},
                         {"total_mentions", t.total_mentions},
                         {"share_of_mentions", share}});
  }
  emit(artifact::kCategoryFrequency, rows);

  // Outliers, each with the window that scored highest on that polarity.
  rows = csv::format_row({"polarity", "expression", "value", "side", "sample_occurrence_id", "sample_score",
                          "sample_window"});
  json outliers = json::object();
  for (auto p : sentiment::kPolarities) {
    const std::string pname(sentiment::polarity_name(p));
    if (lex.size() < 4) {
      outliers[pname] = {{"error", "fewer than four lexicon expressions"}};
      continue;
    }
    json list = json::array();
    for (const auto& o : sentiment::find_outliers(lex, p)) {
      const sentiment::ScoredOccurrence* best = nullptr;
      for (const auto& s : scored) {
        if (s.group != Group::Lexicon || s.expression != o.expression) continue;
        const double v = sentiment::polarity_value(s.simplex, p);
        if (!best || v > sentiment::polarity_value(best->simplex, p) ||
            (v == sentiment::polarity_value(best->simplex, p) && s.occurrence_id < best->occurrence_id)) {
          best = &s;
        }
      }
      const auto& window = windows.at({Group::Lexicon, best->occurrence_id});
      const double sample_score = sentiment::polarity_value(best->simplex, p);
      const std::string side = o.side == sentiment::Side::High ? "high" : "low";
      rows += csv::format_row({pname, o.expression, num(o.value), side, std::to_string(best->occurrence_id),
                               num(sample_score), window.text});
      list.push_back({{"expression", o.expression},
                      {"value", o.value},
                      {"side", side},
                      {"sample_occurrence_id", best->occurrence_id}});
    }
    outliers[pname] = list;
  }
  emit(artifact::kOutliers, rows);

  json summary;
  summary["weighting"] = sentiment::weighting_name(config.weighting);
  summary["model_ids"] = model_ids;
  summary["counts"] = {{"lexicon_occurrences", lexicon_occs.size()},
                       {"lexicon_windows", lexicon_windows},
                       {"control_windows", control_windows},
                       {"scores", scores.size()},
                       {"lexicon_expressions", lex.size()},
                       {"control_expressions", ctl.size()},
                       {"control_min_count", control_doc.value("min_count", 0LL)},
                       {"unique_adverbs", counts.unique_adverbs},
                       {"absent_adverbs", counts.absent_adverbs}};
  summary["descriptives"] = descriptives;
  if (lex.size() >= 2) {
    // Same expressions on both sides, so the comparison is paired.
    summary["lexicon_negative_vs_positive"] =
        stats::to_json(stats::paired_t(sentiment::polarity_values(lex, Polarity::Negative),
                                       sentiment::polarity_values(lex, Polarity::Positive)));
  } else {
    summary["lexicon_negative_vs_positive"] = {{"error", "fewer than two lexicon expressions"}};
  }
  try {
    json cmp = json::array();
    for (const auto& c : sentiment::compare_groups(lex, ctl)) {
      cmp.push_back({{"polarity", sentiment::polarity_name(c.polarity)},
                     {"mean_lexicon", c.mean_lexicon},
                     {"mean_control", c.mean_control},
                     {"welch", stats::to_json(c.welch)}});
    }
    summary["group_comparison"] = cmp;
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::Validation) throw;
    summary["group_comparison"] = {{"error", e.what()}};
  }
  summary["categories"] = category_json;
  summary["empty_categories"] = empty_categories;
  summary["category_frequency"] = frequency;
  summary["outliers"] = outliers;
  io::write_json(ws.path(artifact::kSummary), summary);
  report.artifacts.insert(report.artifacts.begin(), std::string(artifact::kSummary));
  report.details = {{"expressions", expressions.size()},
                    {"lexicon_expressions", lex.size()},
                    {"control_expressions", ctl.size()},
                    {"non_empty_categories", categories.categories.size()}};
  return report;
}

}  // namespace tempus::pipeline
