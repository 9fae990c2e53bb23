#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "spendtraits/features.hpp"
#include "spendtraits/forest.hpp"
#include "spendtraits/matrix.hpp"

namespace spendtraits {

enum class RuleOp : std::uint8_t { LessEq, Greater };

struct RuleCondition {
  std::size_t feature = 0;
  RuleOp op = RuleOp::LessEq;
  double threshold = 0.0;

  bool matches(std::span<const double> row) const {
    double v = row[feature];
    return op == RuleOp::LessEq ? v <= threshold : v > threshold;
  }
};

// One root-to-leaf path of the surrogate tree whose leaf predicts the
// positive class; conditions are conjunctive.
struct Rule {
  std::vector<RuleCondition> conditions;

  bool matches(std::span<const double> row) const;
};

struct RuleProvenance {
  std::string model_id;
  int surrogate_depth = 0;
  std::string train_split_id;
};

// Positive-class rules plus the implicit default rule. Rules are distinct
// tree paths, so exactly one of them (or the default) fires per instance.
struct RuleSet {
  std::vector<Rule> positive_rules;
  std::string positive_label = "positive";
  std::string default_label = "Default";
  RuleProvenance provenance;
  // Set when the model predicted a single class on the whole training split.
  bool single_class_warning = false;

  bool predict(std::span<const double> row) const;
  std::vector<int> predict_rows(const Matrix& x) const;
  bool references_feature(std::size_t feature) const;

  nlohmann::ordered_json to_json() const;
  static RuleSet from_json(const nlohmann::json& j);
};

// Fits a depth-limited CART surrogate to the model's predicted classes on its
// own training split and reads the positive leaves off as rules. Leaf ties go
// to the default class.
RuleSet extract_rules(const Classifier& model, const Matrix& x_train, int max_depth = 3,
                      int min_leaf = 5);

struct FidelityReport {
  double fidelity = 0.0;
  double fscore_f = 0.0;
  double precision_f = 0.0;
  double recall_f = 0.0;
  // The model predicted no positives on the evaluation split, which leaves
  // recall (and fscore) undefined; the fields are reported as zero.
  bool degenerate = false;
  std::size_t model_positives = 0;
  std::size_t rule_positives = 0;
  std::size_t n = 0;

  nlohmann::ordered_json to_json() const;
};

// Agreement between rule predictions and model predictions on a held-out
// split, with the model's classes treated as ground truth.
FidelityReport evaluate_fidelity(const RuleSet& rules, const Classifier& model,
                                 const Matrix& x_test);

struct BaselineReport {
  double fidelity = 0.0;
  double fscore_f = 0.0;
  double precision_f = 0.0;
  double recall_f = 0.0;
  double rate = 0.0;
  int repetitions = 0;

  nlohmann::ordered_json to_json() const;
};

// Expected quality of a rule-free explanation that predicts positive with
// probability `rate`, averaged over `repetitions` seeded draws.
BaselineReport random_baseline(const Classifier& model, const Matrix& x_test, double rate,
                               int repetitions, std::uint64_t seed);

// Human-readable if/then/else listing, thresholds at `sig_digits` significant
// digits. The JSON form is the lossless serialization; this is for people.
std::string render_rules(const RuleSet& rules, const FeatureRegistry& registry,
                         int sig_digits = 4);

}  // namespace spendtraits
