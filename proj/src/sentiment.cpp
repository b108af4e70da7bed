#include "tempus/sentiment.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <mutex>
#include <thread>

#include "tempus/io.hpp"

namespace tempus::sentiment {

namespace fs = std::filesystem;

ScoreCache::ScoreCache(fs::path dir) : dir_(std::move(dir)) {}

std::string ScoreCache::key_for(std::string_view model_id, const context::ContextWindow& window) {
  std::string material;
  material.append(model_id);
  material.push_back('\0');
  material.append(window.text);
  material.push_back('\0');
  material.append(std::to_string(window.aspect_span.begin));
  material.push_back(':');
  material.append(std::to_string(window.aspect_span.end));
  return text::sha256_hex(material);
}

fs::path ScoreCache::entry_path(const std::string& key) const {
  return dir_ / key.substr(0, 2) / (key + ".json");
}

std::optional<PolaritySimplex> ScoreCache::get(const std::string& key) {
  {
    std::shared_lock lock(mutex_);
    if (auto it = memory_.find(key); it != memory_.end()) {
      ++hits_;
      return it->second;
    }
  }
  if (!dir_.empty()) {
    const auto path = entry_path(key);
    std::error_code ec;
    if (fs::exists(path, ec)) {
      const auto j = io::read_json(path);
      PolaritySimplex s{j.at("negative").get<double>(), j.at("neutral").get<double>(),
                        j.at("positive").get<double>()};
      std::unique_lock lock(mutex_);
      memory_.emplace(key, s);
      ++hits_;
      return s;
    }
  }
  ++misses_;
  return std::nullopt;
}

void ScoreCache::put(const std::string& key, const PolaritySimplex& value) {
  std::unique_lock lock(mutex_);
  memory_[key] = value;
  if (!dir_.empty()) io::write_file_atomic(entry_path(key), backend::to_json(value).dump() + "\n");
}

PolaritySimplex score_window(const context::ContextWindow& window, backend::SentimentBackend& backend,
                             ScoreCache& cache) {
  if (!window.aspect_round_trips()) {
    throw Error(ErrorKind::Validation, "window " + std::to_string(window.occurrence_id) +
                                           ": aspect span does not match aspect surface");
  }
  const auto key = ScoreCache::key_for(backend.model_id(), window);
  if (auto hit = cache.get(key)) return *hit;
  const auto s = backend.score({window.text, window.aspect_surface, window.aspect_span});
  if (!s.is_valid()) {
    throw Error(ErrorKind::Backend,
                "backend returned an invalid simplex (" + text::format_double(s.negative) + ", " +
                    text::format_double(s.neutral) + ", " + text::format_double(s.positive) +
                    ") for occurrence " + std::to_string(window.occurrence_id));
  }
  cache.put(key, s);
  return s;
}

std::vector<WindowScore> score_all(const std::vector<context::ContextWindow>& windows,
                                   backend::SentimentBackend& backend, ScoreCache& cache,
                                   std::size_t concurrency) {
  std::vector<WindowScore> out(windows.size());
  if (windows.empty()) return out;
  const auto model = backend.model_id();
  const std::size_t workers = std::clamp<std::size_t>(concurrency, 1, windows.size());

  std::atomic<std::size_t> next{0};
  std::atomic<bool> stop{false};
  std::exception_ptr first_error;
  std::mutex error_mutex;

  auto work = [&] {
    for (;;) {
      const auto i = next.fetch_add(1);
      if (i >= windows.size() || stop) return;
      try {
        out[i] = {windows[i].group, windows[i].occurrence_id, score_window(windows[i], backend, cache), model};
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!first_error) first_error = std::current_exception();
        stop = true;
        return;
      }
    }
  };
  std::vector<std::thread> threads;
  for (std::size_t t = 1; t < workers; ++t) threads.emplace_back(work);
  work();
  for (auto& t : threads) t.join();
  if (first_error) std::rethrow_exception(first_error);

  std::sort(out.begin(), out.end(), [](const WindowScore& a, const WindowScore& b) {
    if (a.group != b.group) return a.group < b.group;
    return a.occurrence_id < b.occurrence_id;
  });
  return out;
}

nlohmann::json to_json(const WindowScore& s) {
  return {{"group", group_name(s.group)},
          {"occurrence_id", s.occurrence_id},
          {"negative", s.simplex.negative},
          {"neutral", s.simplex.neutral},
          {"positive", s.simplex.positive},
          {"model_id", s.model_id}};
}

WindowScore score_from_json(const nlohmann::json& j) {
  try {
    WindowScore s;
    s.group = parse_group(j.at("group").get<std::string>());
    s.occurrence_id = j.at("occurrence_id").get<std::uint64_t>();
    s.simplex = {j.at("negative").get<double>(), j.at("neutral").get<double>(), j.at("positive").get<double>()};
    s.model_id = j.at("model_id").get<std::string>();
    return s;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::Validation, std::string("malformed score record: ") + e.what());
  }
}

std::vector<ExpressionSentiment> aggregate_expression(std::vector<ScoredOccurrence> scores) {
  std::sort(scores.begin(), scores.end(), [](const ScoredOccurrence& a, const ScoredOccurrence& b) {
    if (a.group != b.group) return a.group < b.group;
    if (a.expression != b.expression) return a.expression < b.expression;
    return a.occurrence_id < b.occurrence_id;
  });
  std::vector<ExpressionSentiment> out;
  for (std::size_t i = 0; i < scores.size();) {
    std::size_t j = i;
    ExpressionSentiment e;
    e.expression = scores[i].expression;
    e.group = scores[i].group;
    e.category = scores[i].category;
    // Running means: a constant input comes back exactly, so equal scores
    // never turn into spurious outliers through rounding.
    while (j < scores.size() && scores[j].group == e.group && scores[j].expression == e.expression) {
      const double k = static_cast<double>(j - i + 1);
      e.mean_negative += (scores[j].simplex.negative - e.mean_negative) / k;
      e.mean_neutral += (scores[j].simplex.neutral - e.mean_neutral) / k;
      e.mean_positive += (scores[j].simplex.positive - e.mean_positive) / k;
      ++j;
    }
    e.n_occurrences = j - i;
    out.push_back(std::move(e));
    i = j;
  }
  return out;
}

std::string_view weighting_name(Weighting w) {
  return w == Weighting::Unweighted ? "unweighted" : "occurrence";
}

std::optional<Weighting> parse_weighting(std::string_view name) {
  if (name == "unweighted") return Weighting::Unweighted;
  if (name == "occurrence") return Weighting::Occurrence;
  return std::nullopt;
}

CategoryAggregate aggregate_category(const std::vector<ExpressionSentiment>& expressions, Weighting weighting) {
  CategoryAggregate out;
  for (auto cat : lexicon::kCategories) {
    const auto name = lexicon::category_name(cat);
    CategorySentiment cs{cat};
    double wsum = 0, sn = 0, su = 0, sp = 0;
    for (const auto& e : expressions) {
      if (e.group != Group::Lexicon || e.category != name) continue;
      const double w = weighting == Weighting::Unweighted ? 1.0 : static_cast<double>(e.n_occurrences);
      ++cs.n_expressions;
      cs.n_occurrences += e.n_occurrences;
      wsum += w;
      sn += w * e.mean_negative;
      su += w * e.mean_neutral;
      sp += w * e.mean_positive;
    }
    if (cs.n_expressions == 0) {
      out.empty.push_back(cat);
      continue;
    }
    cs.mean_negative = sn / wsum;
    cs.mean_neutral = su / wsum;
    cs.mean_positive = sp / wsum;
    out.categories.push_back(cs);
  }
  return out;
}

std::string_view polarity_name(Polarity p) {
  switch (p) {
    case Polarity::Negative: return "negative";
    case Polarity::Neutral: return "neutral";
    case Polarity::Positive: return "positive";
  }
  return {};
}

double polarity_value(const ExpressionSentiment& e, Polarity p) {
  switch (p) {
    case Polarity::Negative: return e.mean_negative;
    case Polarity::Neutral: return e.mean_neutral;
    case Polarity::Positive: return e.mean_positive;
  }
  return 0;
}

double polarity_value(const PolaritySimplex& s, Polarity p) {
  switch (p) {
    case Polarity::Negative: return s.negative;
    case Polarity::Neutral: return s.neutral;
    case Polarity::Positive: return s.positive;
  }
  return 0;
}

std::vector<double> polarity_values(const std::vector<ExpressionSentiment>& es, Polarity p) {
  std::vector<double> out;
  out.reserve(es.size());
  for (const auto& e : es) out.push_back(polarity_value(e, p));
  return out;
}

std::vector<PolarityComparison> compare_groups(const std::vector<ExpressionSentiment>& lexicon_group,
                                               const std::vector<ExpressionSentiment>& control_group) {
  if (lexicon_group.size() < 2 || control_group.size() < 2) {
    throw Error(ErrorKind::Validation, "group comparison needs at least two expressions per group (have " +
                                           std::to_string(lexicon_group.size()) + " lexicon, " +
                                           std::to_string(control_group.size()) + " control)");
  }
  std::vector<PolarityComparison> out;
  for (auto p : kPolarities) {
    const auto a = polarity_values(lexicon_group, p);
    const auto b = polarity_values(control_group, p);
    out.push_back({p, stats::mean(a), stats::mean(b), stats::welch_t(a, b)});
  }
  return out;
}

std::vector<Outlier> find_outliers(const std::vector<ExpressionSentiment>& expressions, Polarity polarity) {
  const auto values = polarity_values(expressions, polarity);
  const auto fences = stats::iqr_fences(values);
  const auto med = stats::describe(values).median;
  std::vector<Outlier> out;
  for (const auto& e : expressions) {
    const double v = polarity_value(e, polarity);
    if (v > fences.high) out.push_back({e.expression, v, Side::High});
    if (v < fences.low) out.push_back({e.expression, v, Side::Low});
  }
  std::sort(out.begin(), out.end(), [med](const Outlier& a, const Outlier& b) {
    const double da = std::fabs(a.value - med);
    const double db = std::fabs(b.value - med);
    if (da != db) return da > db;
    return a.expression < b.expression;
  });
  return out;
}

}  // namespace tempus::sentiment
