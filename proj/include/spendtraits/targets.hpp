#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "spendtraits/ingest.hpp"

namespace spendtraits {

// One trait (six items) or facet (two items). `reversed[i]` marks item i of
// the scale as reverse-keyed (response v scores as 6 - v).
struct ScaleDefinition {
  std::string name;
  std::string parent;  // empty for traits, owning trait name for facets
  std::vector<int> items;  // 0-based indices into the 30 survey items
  std::vector<bool> reversed;

  bool is_facet() const { return !parent.empty(); }
};

struct ScaleConfig {
  std::vector<ScaleDefinition> scales;

  // Traits must have 6 items, facets 2, and each trait's facets must
  // partition its items. Item indices must be within 0..29 and unique
  // within a scale.
  void validate() const;
  const ScaleDefinition& find(const std::string& name) const;

  nlohmann::ordered_json to_json() const;
  static ScaleConfig from_json(const nlohmann::json& j);
  static ScaleConfig load(const std::filesystem::path& path);
};

// Averaged item scores per person, in survey row order; range [1, 5].
std::vector<double> score_scale(const SurveyTable& survey, const ScaleDefinition& def);

// Internal consistency, sample variances. Throws on degenerate scales
// (zero variance of the item sums), fewer than 2 items or fewer than
// 2 persons.
double cronbach_alpha(const SurveyTable& survey, const ScaleDefinition& def);

struct MinMaxParams {
  double min = 0.0;
  double max = 1.0;
};

// Throws when all values are equal.
MinMaxParams fit_minmax(std::span<const double> values);
std::vector<double> apply_minmax(std::span<const double> values, const MinMaxParams& params);

// Linear interpolation between order statistics at rank p/100 * (n-1).
double percentile(std::span<const double> values, double p);

struct DiscretizeResult {
  std::vector<std::uint8_t> high;  // score strictly above the 66th percentile
  std::vector<std::uint8_t> low;   // score strictly below the 33rd percentile
  double p33 = 0.0;
  double p66 = 0.0;
};

// Percentiles are computed over the full sample; ties at a threshold fall
// into the default (middle) class. Requires at least 3 persons.
DiscretizeResult discretize(std::span<const double> scores);

struct TraitTargets {
  std::string trait;
  std::vector<double> raw;         // [1, 5]
  std::vector<double> normalized;  // [0, 1]
  std::vector<std::uint8_t> high;
  std::vector<std::uint8_t> low;
};

struct TargetsTable {
  std::vector<std::string> person_ids;         // survey row order
  std::vector<TraitTargets> targets;           // one entry per scale
  std::vector<std::pair<std::string, double>> alphas;  // traits only

  const TraitTargets& find(const std::string& trait) const;
};

TargetsTable build_targets(const SurveyTable& survey, const ScaleConfig& config);

// CSV: person_id,trait,raw,normalized,high,low — one row per person per scale.
void write_targets_csv(const std::filesystem::path& path, const TargetsTable& table);
TargetsTable read_targets_csv(const std::filesystem::path& path);

}  // namespace spendtraits
