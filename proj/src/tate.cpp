#include "tempus/tate.hpp"

#include <algorithm>
#include <charconv>
#include <set>

#include "tempus/csv.hpp"
#include "tempus/embedded_data.hpp"
#include "tempus/error.hpp"
#include "tempus/io.hpp"
#include "tempus/text.hpp"

namespace tempus::tate {

namespace {

int parse_int(const std::string& field, const std::string& where) {
  const auto t = text::trim(field);
  int v = 0;
  auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (ec != std::errc() || ptr != t.data() + t.size()) {
    throw Error(ErrorKind::Validation, where + ": \"" + field + "\" is not an integer");
  }
  return v;
}

void check_header(const std::vector<csv::Row>& rows, const std::vector<std::string>& expected,
                  const std::string& what) {
  if (rows.empty() || rows[0] != expected) {
    throw Error(ErrorKind::Validation, what + " header must be: " + csv::format_row(expected));
  }
}

}  // namespace

ItemRegistry ItemRegistry::parse(std::string_view content) {
  const auto rows = csv::parse(content);
  check_header(rows, {"code", "name", "domain"}, "TATE item registry");
  ItemRegistry reg;
  std::set<std::string> codes;
  std::set<int> domains;
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const auto where = "item registry row " + std::to_string(r);
    if (rows[r].size() != 3) throw Error(ErrorKind::Validation, where + ": expected 3 columns");
    TateItem item{std::string(text::trim(rows[r][0])), rows[r][1], parse_int(rows[r][2], where)};
    if (item.domain < 1 || item.domain > 7) throw Error(ErrorKind::Validation, where + ": domain must be 1..7");
    if (!codes.insert(item.code).second) {
      throw Error(ErrorKind::Validation, where + ": duplicate item code " + item.code);
    }
    domains.insert(item.domain);
    reg.items_.push_back(std::move(item));
  }
  if (reg.items_.size() != kItemCount) {
    throw Error(ErrorKind::Validation,
                "item registry has " + std::to_string(reg.items_.size()) + " items, expected 42");
  }
  if (domains.size() != 7) throw Error(ErrorKind::Validation, "item registry must cover all seven domains");
  return reg;
}

ItemRegistry ItemRegistry::load(const std::filesystem::path& path) { return parse(io::read_file(path)); }

const ItemRegistry& ItemRegistry::builtin() {
  static const ItemRegistry reg = parse(embedded::tate_items_csv());
  return reg;
}

const TateItem* ItemRegistry::find(std::string_view code) const {
  for (const auto& item : items_) {
    if (item.code == code) return &item;
  }
  return nullptr;
}

std::vector<TateResponse> parse_responses(std::string_view content) {
  const auto rows = csv::parse(content);
  check_header(rows, {"participant_id", "item_code", "frequency", "intensity", "impairment"}, "TATE responses");
  std::vector<TateResponse> out;
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const auto where = "responses row " + std::to_string(r);
    if (rows[r].size() != 5) throw Error(ErrorKind::Validation, where + ": expected 5 columns");
    out.push_back({std::string(text::trim(rows[r][0])), std::string(text::trim(rows[r][1])),
                   parse_int(rows[r][2], where), parse_int(rows[r][3], where), parse_int(rows[r][4], where)});
  }
  return out;
}

std::vector<TateResponse> load_responses(const std::filesystem::path& path) {
  return parse_responses(io::read_file(path));
}

double severity(const TateResponse& r) {
  for (int v : {r.frequency, r.intensity, r.impairment}) {
    if (v < kMinRating || v > kMaxRating) {
      throw Error(ErrorKind::Validation, "participant " + r.participant_id + ", item " + r.item_code +
                                             ": rating " + std::to_string(v) + " outside 0..7");
    }
  }
  return static_cast<double>(r.frequency + r.intensity + r.impairment) / 3.0;
}

ParticipantScore score_participant(const std::vector<TateResponse>& responses, const ItemRegistry& registry) {
  ParticipantScore out;
  if (responses.empty()) throw Error(ErrorKind::Validation, "no responses to score");
  out.participant_id = responses.front().participant_id;
  std::map<std::string, double> by_item;
  for (const auto& r : responses) {
    if (r.participant_id != out.participant_id) {
      throw Error(ErrorKind::Validation, "score_participant got responses from several participants");
    }
    if (!registry.find(r.item_code)) {
      throw Error(ErrorKind::Validation, "participant " + r.participant_id + ": unknown item " + r.item_code);
    }
    if (!by_item.emplace(r.item_code, severity(r)).second) {
      throw Error(ErrorKind::Validation,
                  "participant " + r.participant_id + ": duplicate response for item " + r.item_code);
    }
  }
  double total = 0;
  for (const auto& item : registry.items()) {
    auto it = by_item.find(item.code);
    if (it == by_item.end()) {
      out.missing_items.push_back(item.code);
      continue;
    }
    out.items.push_back({item.code, it->second});
    total += it->second;
  }
  if (out.missing_items.empty()) out.total = total;
  return out;
}

std::vector<ParticipantScore> score_all(const std::vector<TateResponse>& responses, const ItemRegistry& registry) {
  std::map<std::string, std::vector<TateResponse>> by_participant;
  for (const auto& r : responses) by_participant[r.participant_id].push_back(r);
  std::vector<ParticipantScore> out;
  for (const auto& [id, rs] : by_participant) out.push_back(score_participant(rs, registry));
  return out;
}

stats::TestReport compare_item(const std::vector<double>& group_a, const std::vector<double>& group_b) {
  return stats::mann_whitney(group_a, group_b);
}

FactorVariance factor_variance(const stats::Matrix& severities, const std::vector<std::string>& item_codes) {
  if (item_codes.size() != severities.cols()) {
    throw Error(ErrorKind::Validation, "factor_variance: item code count does not match matrix columns");
  }
  if (severities.rows() < 2) throw Error(ErrorKind::Validation, "factor_variance needs at least two participants");
  FactorVariance out;
  out.participants = severities.rows();
  std::vector<std::size_t> keep;
  for (std::size_t c = 0; c < severities.cols(); ++c) {
    bool constant = true;
    for (std::size_t r = 1; r < severities.rows() && constant; ++r) {
      constant = severities(r, c) == severities(0, c);
    }
    if (constant) {
      out.dropped_constant_items.push_back(item_codes[c]);
    } else {
      keep.push_back(c);
      out.used_items.push_back(item_codes[c]);
    }
  }
  if (keep.empty()) throw Error(ErrorKind::Validation, "factor_variance: every item column is constant");
  stats::Matrix m(severities.rows(), keep.size());
  for (std::size_t r = 0; r < severities.rows(); ++r) {
    for (std::size_t k = 0; k < keep.size(); ++k) m(r, k) = severities(r, keep[k]);
  }
  out.fraction = stats::first_pc_variance(m);
  return out;
}

stats::Matrix severity_matrix(const std::vector<ParticipantScore>& scores, const ItemRegistry& registry,
                              std::vector<std::string>* participant_ids) {
  std::vector<const ParticipantScore*> complete;
  for (const auto& s : scores) {
    if (s.total) complete.push_back(&s);
  }
  stats::Matrix m(complete.size(), registry.size());
  for (std::size_t r = 0; r < complete.size(); ++r) {
    for (std::size_t c = 0; c < registry.size(); ++c) m(r, c) = complete[r]->items[c].value;
    if (participant_ids) participant_ids->push_back(complete[r]->participant_id);
  }
  return m;
}

std::map<std::string, std::string> parse_groups(std::string_view content) {
  const auto rows = csv::parse(content);
  check_header(rows, {"participant_id", "group"}, "TATE groups");
  std::map<std::string, std::string> out;
  for (std::size_t r = 1; r < rows.size(); ++r) {
    if (rows[r].size() != 2) throw Error(ErrorKind::Validation, "groups row " + std::to_string(r) + ": expected 2 columns");
    if (!out.emplace(std::string(text::trim(rows[r][0])), std::string(text::trim(rows[r][1]))).second) {
      throw Error(ErrorKind::Validation, "groups: participant " + rows[r][0] + " listed twice");
    }
  }
  return out;
}

}  // namespace tempus::tate
