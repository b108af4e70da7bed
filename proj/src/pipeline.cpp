#include "tempus/pipeline.hpp"

#include <algorithm>
#include <map>
#include <memory>
#include <set>

#include "tempus/context.hpp"
#include "tempus/corpus.hpp"
#include "tempus/csv.hpp"
#include "tempus/error.hpp"
#include "tempus/io.hpp"
#include "tempus/lexicon.hpp"
#include "tempus/segmentation.hpp"
#include "tempus/sequentiality.hpp"
#include "tempus/tate.hpp"
#include "tempus/text.hpp"
#include "tempus/time_tagger.hpp"
#include "workspace.hpp"

namespace tempus::pipeline {

using nlohmann::json;

// ---- workspace helpers

fs::path Workspace::require(std::string_view rel) const {
  auto p = path(rel);
  if (!fs::exists(p)) {
    fail(ErrorKind::MissingArtifact, "missing artifact " + std::string(rel) + " (expected at " + p.string() + ")");
  }
  return p;
}

const seg::AbbreviationList& Workspace::abbreviations() {
  if (!has(artifact::kAbbreviations)) return seg::AbbreviationList::builtin();
  if (!abbreviations_) abbreviations_ = seg::AbbreviationList::load(path(artifact::kAbbreviations));
  return *abbreviations_;
}

const lexicon::Lexicon& Workspace::lexicon() {
  if (!has(artifact::kLexicon)) return lexicon::Lexicon::builtin();
  if (!lexicon_) lexicon_ = lexicon::Lexicon::load(path(artifact::kLexicon), lexicon::Shape::Any);
  return *lexicon_;
}

const timex::TimeGrammar& Workspace::grammar() {
  if (!has(artifact::kTimeGrammar)) return timex::TimeGrammar::builtin();
  if (!grammar_) grammar_ = timex::TimeGrammar::load(path(artifact::kTimeGrammar));
  return *grammar_;
}

const tate::ItemRegistry& Workspace::tate_items() {
  if (!has(artifact::kTateItems)) return tate::ItemRegistry::builtin();
  if (!tate_items_) tate_items_ = tate::ItemRegistry::load(path(artifact::kTateItems));
  return *tate_items_;
}

std::string book_file(std::string_view source_id) { return "corpus/" + std::string(source_id) + ".txt"; }

std::vector<corpus::BookDocument> Workspace::books() const {
  const auto manifest = io::read_json(require(artifact::kManifest));
  std::vector<corpus::BookDocument> out;
  try {
    for (const auto& b : manifest.at("books")) {
      corpus::BookDocument doc;
      doc.source_id = b.at("source_id").get<std::string>();
      doc.title = b.at("title").get<std::string>();
      doc.authors = b.at("authors").get<std::vector<std::string>>();
      doc.year = b.at("year").get<int>();
      out.push_back(std::move(doc));
    }
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorKind::Validation, std::string("malformed corpus manifest: ") + e.what());
  }
  for (auto& doc : out) doc.text = io::read_file(require(book_file(doc.source_id)));
  return out;
}

// ---- config

void RunConfig::validate() const {
  if (workspace.empty()) fail(ErrorKind::Validation, "workspace path is empty");
  if (stub && !backend_url.empty()) {
    fail(ErrorKind::Validation, "choose either --stub or a backend URL, not both");
  }
  if (!backend_url.empty() && backend_url.rfind("http://", 0) != 0) {
    fail(ErrorKind::Validation, "backend URL must start with http:// (got \"" + backend_url + "\")");
  }
  if (min_count < 1) fail(ErrorKind::Validation, "min_count must be at least 1");
  if (story_length < 2) fail(ErrorKind::Validation, "story length must be at least 2");
  if (concurrency < 1) fail(ErrorKind::Validation, "concurrency must be at least 1");
}

fs::path RunConfig::metadata_path() const { return metadata.empty() ? workspace / "metadata.json" : metadata; }

json to_json(const RunConfig& c) {
  json j;
  j["backend"] = c.stub ? json("stub") : c.backend_url.empty() ? json(nullptr) : json(c.backend_url);
  j["min_count"] = c.min_count;
  j["story_length"] = c.story_length;
  j["max_history"] = c.max_history;
  j["concurrency"] = c.concurrency;
  j["weighting"] = sentiment::weighting_name(c.weighting);
  j["include_first_sentence"] = c.include_first_sentence;
  j["topic"] = c.topic.empty() ? json("<book title>") : json(c.topic);
  j["metadata"] = c.metadata.empty() ? std::string("metadata.json") : c.metadata.generic_string();
  return j;
}

json to_json(const StageReport& r) {
  return {{"stage", r.stage}, {"artifacts", r.artifacts}, {"details", r.details}};
}

bool is_stage(std::string_view name) {
  return std::find(kStages.begin(), kStages.end(), name) != kStages.end();
}

namespace {

struct BackendHolder {
  std::unique_ptr<backend::StubBackend> stub;
  std::unique_ptr<backend::HttpBackend> http;

  template <class T>
  T& get(const RunConfig& config, T* injected) {
    if (injected) return *injected;
    if (config.stub) {
      if (!stub) stub = std::make_unique<backend::StubBackend>();
      return *stub;
    }
    if (!config.backend_url.empty()) {
      if (!http) http = std::make_unique<backend::HttpBackend>(config.backend_url);
      return *http;
    }
    fail(ErrorKind::Validation, "this stage needs a backend: pass --stub or --backend-url (or set TEMPUS_BACKEND_URL)");
  }
};

std::vector<Occurrence> read_occurrences(const fs::path& p) {
  std::vector<Occurrence> out;
  for (const auto& j : io::read_jsonl(p)) out.push_back(occurrence_from_json(j));
  return out;
}

std::vector<json> to_records(const std::vector<Occurrence>& occs) {
  std::vector<json> out;
  out.reserve(occs.size());
  for (const auto& o : occs) out.push_back(to_json(o));
  return out;
}

// ---- stages

StageReport ingest(const RunConfig& config, Workspace& ws) {
  const auto meta_path = config.metadata_path();
  if (!fs::exists(meta_path)) {
    fail(ErrorKind::MissingArtifact, "missing artifact metadata.json (expected at " + meta_path.string() + ")");
  }
  const auto metadata = corpus::load_metadata(meta_path);
  std::vector<corpus::BookDocument> docs;
  for (const auto& m : metadata) {
    const auto raw = corpus::load_raw_book(m.source_id, m.raw_path);
    auto cleaned = corpus::clean_text(corpus::extract_main_text(raw, m.main_page_range));
    docs.push_back({m.source_id, m.title, m.authors, m.year, std::move(cleaned.text), cleaned.log});
  }
  std::vector<corpus::DuplicateRecord> removed;
  docs = corpus::deduplicate(std::move(docs), &removed);

  // Drop texts left over from an earlier ingest so the corpus directory
  // mirrors the manifest exactly.
  const auto corpus_dir = ws.path("corpus");
  if (fs::exists(corpus_dir)) {
    for (const auto& entry : fs::directory_iterator(corpus_dir)) {
      if (entry.is_regular_file() && entry.path().extension() == ".txt") fs::remove(entry.path());
    }
  }

  StageReport report{"ingest", {}, {}};
  json books = json::array();
  for (const auto& d : docs) {
    io::write_file_atomic(ws.path(book_file(d.source_id)), d.text);
    report.artifacts.push_back(book_file(d.source_id));
    books.push_back({{"source_id", d.source_id},
                     {"title", d.title},
                     {"authors", d.authors},
                     {"year", d.year},
                     {"cleaning_log", corpus::to_json(d.cleaning_log)}});
  }
  json dups = json::array();
  for (const auto& r : removed) {
    dups.push_back({{"source_id", r.source_id}, {"duplicate_of", r.duplicate_of}, {"reason", r.reason}});
  }
  io::write_json(ws.path(artifact::kManifest), {{"books", books}, {"removed_duplicates", dups}});
  report.artifacts.insert(report.artifacts.begin(), std::string(artifact::kManifest));
  report.details = {{"books_in_metadata", metadata.size()}, {"books_kept", docs.size()}, {"duplicates_removed", removed.size()}};
  return report;
}

StageReport stats_stage(Workspace& ws) {
  const auto books = ws.books();
  const auto segmenter = ws.segmenter();
  const auto s = corpus::corpus_stats(books, segmenter);
  io::write_json(ws.path(artifact::kCorpusStats), corpus::to_json(s));
  return {"stats",
          {std::string(artifact::kCorpusStats)},
          {{"books", s.books}, {"sentences", s.sentences.total}, {"words", s.words.total}}};
}

std::vector<seg::SegmentedText> segment_books(Workspace& ws, const std::vector<corpus::BookDocument>& books) {
  const auto segmenter = ws.segmenter();
  std::vector<seg::SegmentedText> out;
  out.reserve(books.size());
  for (const auto& b : books) out.push_back(seg::segment(b.text, b.source_id, segmenter));
  return out;
}

StageReport match_stage(Workspace& ws) {
  const auto books = ws.books();
  const auto segmented = segment_books(ws, books);
  std::vector<Occurrence> occs;
  for (const auto& s : segmented) {
    auto found = lexicon::match_occurrences(s, ws.lexicon());
    occs.insert(occs.end(), std::make_move_iterator(found.begin()), std::make_move_iterator(found.end()));
  }
  assign_occurrence_ids(occs);
  io::write_jsonl(ws.path(artifact::kOccurrences), to_records(occs));
  const auto counts = lexicon::category_counts(occs, ws.lexicon());
  return {"match",
          {std::string(artifact::kOccurrences)},
          {{"occurrences", occs.size()},
           {"unique_adverbs", counts.unique_adverbs},
           {"absent_adverbs", counts.absent_adverbs.size()}}};
}

StageReport tag_times_stage(const RunConfig& config, Workspace& ws) {
  const auto books = ws.books();
  const auto segmented = segment_books(ws, books);
  std::vector<Occurrence> occs;
  for (const auto& s : segmented) {
    auto found = timex::tag_time_expressions(s, ws.grammar());
    occs.insert(occs.end(), std::make_move_iterator(found.begin()), std::make_move_iterator(found.end()));
  }
  assign_occurrence_ids(occs);
  const auto control = timex::build_control_group(occs, ws.lexicon(), config.min_count);
  for (const auto& e : control) {
    if (ws.lexicon().contains(e.normalized)) {
      fail(ErrorKind::Validation, "control expression \"" + e.normalized + "\" is also a lexicon adverb");
    }
  }
  long long control_occurrences = 0;
  json expressions = json::array();
  for (const auto& e : control) {
    expressions.push_back(timex::to_json(e));
    control_occurrences += e.total_count;
  }
  io::write_jsonl(ws.path(artifact::kTimeOccurrences), to_records(occs));
  io::write_json(ws.path(artifact::kControlGroup),
                 {{"min_count", config.min_count},
                  {"total_occurrences", control_occurrences},
                  {"expressions", expressions}});
  return {"tag-times",
          {std::string(artifact::kTimeOccurrences), std::string(artifact::kControlGroup)},
          {{"time_occurrences", occs.size()},
           {"control_expressions", control.size()},
           {"control_occurrences", control_occurrences}}};
}

std::set<std::string> control_expressions(const Workspace& ws) {
  const auto j = io::read_json(ws.require(artifact::kControlGroup));
  std::set<std::string> out;
  try {
    for (const auto& e : j.at("expressions")) out.insert(timex::time_expression_from_json(e).normalized);
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorKind::Validation, std::string("malformed control_group.json: ") + e.what());
  }
  return out;
}

StageReport contexts_stage(Workspace& ws) {
  auto occs = read_occurrences(ws.require(artifact::kOccurrences));
  const auto control = control_expressions(ws);
  std::size_t n_control = 0;
  for (auto& o : read_occurrences(ws.require(artifact::kTimeOccurrences))) {
    if (control.count(o.expression)) {
      occs.push_back(std::move(o));
      ++n_control;
    }
  }
  const auto books = ws.books();
  context::SentenceIndex index;
  const auto segmenter = ws.segmenter();
  for (const auto& b : books) index.emplace(b.source_id, segmenter.split_sentences(b.text, b.source_id));

  const auto windows = context::extract_all(occs, index);
  std::vector<json> records;
  std::map<std::string, std::size_t> kinds;
  std::size_t bad_round_trips = 0;
  for (const auto& w : windows) {
    records.push_back(context::to_json(w));
    ++kinds[std::string(context::kind_name(w.kind))];
    if (!w.aspect_round_trips()) ++bad_round_trips;
  }
  if (bad_round_trips) {
    fail(ErrorKind::Validation, std::to_string(bad_round_trips) + " windows failed the aspect span round-trip");
  }
  io::write_jsonl(ws.path(artifact::kWindows), records);
  return {"contexts",
          {std::string(artifact::kWindows)},
          {{"windows", windows.size()},
           {"lexicon_windows", windows.size() - n_control},
           {"control_windows", n_control},
           {"kinds", kinds}}};
}

StageReport score_stage(const RunConfig& config, Workspace& ws, backend::SentimentBackend& be) {
  std::vector<context::ContextWindow> windows;
  for (const auto& j : io::read_jsonl(ws.require(artifact::kWindows))) windows.push_back(context::window_from_json(j));
  sentiment::ScoreCache cache(ws.path(artifact::kSentimentCache));
  const auto scores = sentiment::score_all(windows, be, cache, config.concurrency);
  std::vector<json> records;
  for (const auto& s : scores) records.push_back(sentiment::to_json(s));
  io::write_jsonl(ws.path(artifact::kScores), records);
  return {"score",
          {std::string(artifact::kScores), std::string(artifact::kSentimentCache)},
          {{"scores", scores.size()},
           {"model_id", be.model_id()},
           {"cache_hits", cache.hits()},
           {"cache_misses", cache.misses()}}};
}

StageReport sequentiality_stage(const RunConfig& config, Workspace& ws, backend::LogProbBackend& be) {
  auto books = ws.books();
  std::sort(books.begin(), books.end(), [](const auto& a, const auto& b) { return a.source_id < b.source_id; });
  const auto segmenter = ws.segmenter();
  std::vector<sequentiality::Story> stories;
  std::vector<sequentiality::SkippedBook> skipped;
  for (const auto& b : books) {
    const auto topic = config.topic.empty() ? b.title : config.topic;
    sequentiality::SkippedBook skip;
    auto story = sequentiality::build_story(b.source_id, topic, segmenter.split_sentences(b.text, b.source_id),
                                            config.story_length, &skip);
    if (story) {
      stories.push_back(std::move(*story));
    } else {
      skipped.push_back(std::move(skip));
    }
  }
  sequentiality::NllScorer scorer(be);
  sequentiality::Options options;
  options.include_first_sentence = config.include_first_sentence;
  const auto curve = sequentiality::sweep_history(stories, scorer, options, config.concurrency, config.max_history);

  std::string rows = csv::format_row({"story_id", "h", "value"});
  for (std::size_t s = 0; s < curve.story_ids.size(); ++s) {
    for (std::size_t h = 0; h < curve.history_sizes.size(); ++h) {
      rows += csv::format_row({curve.story_ids[s], sequentiality::history_label(curve.history_sizes[h]),
                               text::format_double(curve.per_story[s][h])});
    }
  }
  std::string curve_rows = csv::format_row({"h", "mean", "stories"});
  json history = json::array();
  for (std::size_t h = 0; h < curve.history_sizes.size(); ++h) {
    const auto label = sequentiality::history_label(curve.history_sizes[h]);
    curve_rows += csv::format_row({label, text::format_double(curve.mean[h]), std::to_string(curve.story_ids.size())});
    history.push_back({{"h", label}, {"mean", curve.mean[h]}});
  }
  json story_list = json::array();
  for (const auto& s : stories) {
    story_list.push_back({{"source_id", s.source_id},
                          {"topic", s.topic},
                          {"sentences", s.sentences.size()},
                          {"short", s.short_story}});
  }
  json skipped_list = json::array();
  for (const auto& s : skipped) skipped_list.push_back({{"source_id", s.source_id}, {"reason", s.reason}});

  io::write_file_atomic(ws.path(artifact::kSequentiality), rows);
  io::write_file_atomic(ws.path(artifact::kSequentialityCurve), curve_rows);
  io::write_json(ws.path(artifact::kSequentialitySummary),
                 {{"model_id", be.model_id()},
                  {"story_length", config.story_length},
                  {"include_first_sentence", config.include_first_sentence},
                  {"history", history},
                  {"stories", story_list},
                  {"skipped", skipped_list}});
  return {"sequentiality",
          {std::string(artifact::kSequentiality), std::string(artifact::kSequentialitySummary),
           std::string(artifact::kSequentialityCurve)},
          {{"stories", stories.size()}, {"skipped", skipped.size()}, {"backend_calls", scorer.backend_calls()}}};
}

StageReport tate_stage(Workspace& ws) {
  const auto& registry = ws.tate_items();
  const auto responses = tate::load_responses(ws.require(artifact::kTateResponses));
  const auto scores = tate::score_all(responses, registry);

  std::string rows = csv::format_row({"participant_id", "item_code", "severity"});
  json incomplete = json::array();
  for (const auto& p : scores) {
    for (const auto& item : p.items) {
      rows += csv::format_row({p.participant_id, item.item_code, text::format_double(item.value)});
    }
    rows += csv::format_row({p.participant_id, "total", p.total ? text::format_double(*p.total) : ""});
    if (!p.total) incomplete.push_back({{"participant_id", p.participant_id}, {"missing_items", p.missing_items}});
  }

  json out;
  out["participants"] = scores.size();
  out["incomplete_participants"] = incomplete;

  std::vector<std::string> ids;
  const auto matrix = tate::severity_matrix(scores, registry, &ids);
  std::vector<std::string> codes;
  for (const auto& item : registry.items()) codes.push_back(item.code);
  if (matrix.rows() >= 2) {
    try {
      const auto fv = tate::factor_variance(matrix, codes);
      out["factor_variance"] = {{"fraction", fv.fraction},
                                {"participants", fv.participants},
                                {"used_items", fv.used_items.size()},
                                {"dropped_constant_items", fv.dropped_constant_items}};
    } catch (const Error& e) {
      out["factor_variance"] = {{"error", e.what()}};
    }
  } else {
    out["factor_variance"] = {{"error", "fewer than two complete participants"}};
  }

  if (ws.has(artifact::kTateGroups)) {
    const auto groups = tate::parse_groups(io::read_file(ws.path(artifact::kTateGroups)));
    std::set<std::string> labels;
    for (const auto& [id, g] : groups) labels.insert(g);
    if (labels.size() != 2) {
      fail(ErrorKind::Validation, "tate_groups.csv must name exactly two groups (found " +
                                      std::to_string(labels.size()) + ")");
    }
    const std::string label_a = *labels.begin();
    const std::string label_b = *labels.rbegin();
    json items = json::array();
    std::vector<double> total_a, total_b;
    std::map<std::string, std::pair<std::vector<double>, std::vector<double>>> by_item;
    std::set<std::string> unassigned;
    for (const auto& p : scores) {
      auto g = groups.find(p.participant_id);
      if (g == groups.end()) {
        unassigned.insert(p.participant_id);
        continue;
      }
      const bool in_a = g->second == label_a;
      for (const auto& item : p.items) {
        auto& pair = by_item[item.item_code];
        (in_a ? pair.first : pair.second).push_back(item.value);
      }
      if (p.total) (in_a ? total_a : total_b).push_back(*p.total);
    }
    for (const auto& item : registry.items()) {
      json rec = {{"item_code", item.code}, {"name", item.name}, {"domain", item.domain}};
      const auto& pair = by_item[item.code];
      rec["n_a"] = pair.first.size();
      rec["n_b"] = pair.second.size();
      if (pair.first.empty() || pair.second.empty()) {
        rec["error"] = "item has no responses in one group";
      } else {
        rec["mann_whitney"] = stats::to_json(tate::compare_item(pair.first, pair.second));
      }
      items.push_back(rec);
    }
    out["groups"] = {{"a", label_a}, {"b", label_b}, {"unassigned_participants", unassigned}};
    out["items"] = items;
    if (!total_a.empty() && !total_b.empty()) {
      out["total"] = stats::to_json(stats::mann_whitney(total_a, total_b));
    }
  }

  io::write_file_atomic(ws.path(artifact::kTateScores), rows);
  io::write_json(ws.path(artifact::kTateComparisons), out);
  return {"tate",
          {std::string(artifact::kTateScores), std::string(artifact::kTateComparisons)},
          {{"participants", scores.size()}, {"complete", ids.size()}}};
}

}  // namespace

StageReport run_stage(std::string_view stage, const RunConfig& config, Backends backends) {
  if (!is_stage(stage)) fail(ErrorKind::Validation, "unknown stage \"" + std::string(stage) + "\"");
  config.validate();
  Workspace ws(config.workspace);
  io::write_json(ws.path(artifact::kRunConfig), to_json(config));
  BackendHolder holder;
  if (stage == "ingest") return ingest(config, ws);
  if (stage == "stats") return stats_stage(ws);
  if (stage == "match") return match_stage(ws);
  if (stage == "tag-times") return tag_times_stage(config, ws);
  if (stage == "contexts") return contexts_stage(ws);
  if (stage == "score") {
    ws.require(artifact::kWindows);
    return score_stage(config, ws, holder.get(config, backends.sentiment));
  }
  if (stage == "analyze") return emit_reports(config);
  if (stage == "sequentiality") {
    ws.require(artifact::kManifest);
    return sequentiality_stage(config, ws, holder.get(config, backends.logprob));
  }
  return tate_stage(ws);
}

std::vector<StageReport> run_all(const RunConfig& config, Backends backends) {
  config.validate();
  // One backend instance for the whole run.
  BackendHolder holder;
  if (!backends.sentiment) backends.sentiment = &holder.get<backend::SentimentBackend>(config, nullptr);
  if (!backends.logprob) backends.logprob = &holder.get<backend::LogProbBackend>(config, nullptr);
  std::vector<StageReport> out;
  for (auto stage : kStages) {
    if (stage == "tate" && !fs::exists(config.workspace / std::string(artifact::kTateResponses))) continue;
    out.push_back(run_stage(stage, config, backends));
  }
  return out;
}

}  // namespace tempus::pipeline
