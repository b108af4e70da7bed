#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "tempus/stats.hpp"

namespace tempus::tate {

inline constexpr int kMinRating = 0;
inline constexpr int kMaxRating = 7;
inline constexpr std::size_t kItemCount = 42;

struct TateItem {
  std::string code;  // e.g. "5.f"
  std::string name;
  int domain = 0;    // 1..7
};

class ItemRegistry {
 public:
  // Validates 42 unique items across domains 1..7 with every domain used.
  static ItemRegistry parse(std::string_view csv_content);
  static ItemRegistry load(const std::filesystem::path& path);
  static const ItemRegistry& builtin();

  const std::vector<TateItem>& items() const { return items_; }
  const TateItem* find(std::string_view code) const;
  std::size_t size() const { return items_.size(); }

 private:
  std::vector<TateItem> items_;
};

struct TateResponse {
  std::string participant_id;
  std::string item_code;
  int frequency = 0;
  int intensity = 0;
  int impairment = 0;
};

std::vector<TateResponse> parse_responses(std::string_view csv_content);
std::vector<TateResponse> load_responses(const std::filesystem::path& path);

// Mean of the three ratings; throws when a rating is outside 0..7.
double severity(const TateResponse& r);

struct SeverityScore {
  std::string item_code;
  double value = 0;
};

struct ParticipantScore {
  std::string participant_id;
  std::vector<SeverityScore> items;  // registry order, answered items only
  std::optional<double> total;       // undefined when items are missing
  std::vector<std::string> missing_items;
};

// All responses must belong to one participant. Duplicate or unknown items
// and out-of-range ratings are errors; missing items leave the total unset.
ParticipantScore score_participant(const std::vector<TateResponse>& responses, const ItemRegistry& registry);

// Scores every participant, sorted by participant_id.
std::vector<ParticipantScore> score_all(const std::vector<TateResponse>& responses, const ItemRegistry& registry);

// Mann-Whitney U with eta squared on one item's severities.
stats::TestReport compare_item(const std::vector<double>& group_a, const std::vector<double>& group_b);

struct FactorVariance {
  double fraction = 0;
  std::vector<std::string> used_items;
  std::vector<std::string> dropped_constant_items;
  std::size_t participants = 0;
};

// First principal component share of variance over a participants x items
// severity matrix. Constant item columns are dropped and reported.
FactorVariance factor_variance(const stats::Matrix& severities, const std::vector<std::string>& item_codes);

// Builds the severity matrix from complete participants only.
stats::Matrix severity_matrix(const std::vector<ParticipantScore>& scores, const ItemRegistry& registry,
                              std::vector<std::string>* participant_ids = nullptr);

// participant_id -> group label, from a CSV with columns participant_id,group.
std::map<std::string, std::string> parse_groups(std::string_view csv_content);

}  // namespace tempus::tate
