#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "spendtraits/forest.hpp"
#include "spendtraits/linear.hpp"
#include "spendtraits/matrix.hpp"

namespace spendtraits {

// Stratified fold assignment: positives and negatives are shuffled
// separately and dealt round-robin, so fold sizes and per-class counts each
// differ by at most one.
struct CvPlan {
  std::vector<std::vector<std::size_t>> folds;
  std::uint64_t seed = 0;

  static CvPlan stratified(std::span<const int> labels, int k, std::uint64_t seed);
};

struct LearnerSpec {
  enum class Kind : std::uint8_t { Forest, Linear };
  Kind kind = Kind::Forest;
  ForestParams forest;
  LinearParams linear;

  nlohmann::ordered_json to_json() const;
  static LearnerSpec from_json(const nlohmann::json& j);
};

struct CvResult {
  std::vector<double> fold_aucs;
  double mean_auc = 0.0;

  nlohmann::ordered_json to_json() const;
};

// Five-fold (by default) stratified cross-validation; the held-out fold is
// scored with the model fit on the remaining folds and summarized by AUC.
// Throws if any fold ends up single-class.
CvResult cross_validate(const Matrix& x, std::span<const int> y, const LearnerSpec& spec,
                        int k = 5, std::uint64_t seed = 0);

// Fits the configured learner on all rows and wraps it as a Classifier with
// a prior-matched threshold chosen on the training scores.
Classifier fit_classifier(const Matrix& x, std::span<const int> y, const LearnerSpec& spec);

// Stratified train/test split of row indices.
struct SplitPlan {
  std::vector<std::size_t> train;
  std::vector<std::size_t> test;

  static SplitPlan stratified(std::span<const int> labels, double train_fraction,
                              std::uint64_t seed);
};

}  // namespace spendtraits
