#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "spendtraits/matrix.hpp"
#include "spendtraits/tree.hpp"

namespace spendtraits {

// Continuous scorer plus the decision threshold; positive when score > threshold.
struct Classifier {
  std::function<double(std::span<const double>)> score;
  double threshold = 0.5;

  bool predict(std::span<const double> row) const { return score(row) > threshold; }
};

struct ForestParams {
  int n_trees = 200;
  int max_depth = -1;  // unlimited
  int min_leaf = 5;
  int mtry = 0;  // 0 resolves to ceil(sqrt(n_features))
  std::uint64_t seed = 0;

  nlohmann::ordered_json to_json() const;
  static ForestParams from_json(const nlohmann::json& j);
};

// Bagged CART ensemble. Each tree sees a bootstrap of the rows (N draws with
// replacement) and samples mtry features at every split; the forest score is
// the mean of the trees' leaf positive fractions. Fully reproducible from the
// seed: per-tree substreams are derived, so fitting order cannot leak state.
class ForestModel {
 public:
  static ForestModel fit(const Matrix& x, std::span<const int> y, const ForestParams& params);

  double score(std::span<const double> row) const;
  std::vector<double> score_rows(const Matrix& x) const;
  bool predict(std::span<const double> row) const { return score(row) > threshold_; }

  double threshold() const { return threshold_; }
  void set_threshold(double t) { threshold_ = t; }

  const std::vector<DecisionTree>& trees() const { return trees_; }
  const ForestParams& params() const { return params_; }
  std::size_t n_features() const { return n_features_; }

  // Mean impurity-reduction importance over trees, normalized to sum 1.
  // Returns all zeros (and sets *degenerate) when no tree ever split.
  std::vector<double> feature_importances(bool* degenerate = nullptr) const;

  Classifier classifier() const;

  nlohmann::ordered_json to_json() const;
  static ForestModel from_json(const nlohmann::json& j);

 private:
  std::vector<DecisionTree> trees_;
  std::vector<std::uint64_t> tree_seeds_;
  ForestParams params_;
  std::size_t n_features_ = 0;
  double threshold_ = 0.5;
};

struct RankedFeature {
  std::size_t feature;
  double weight;
};

// Importances sorted descending, ties broken by feature index.
std::vector<RankedFeature> ranked_importances(const ForestModel& model, bool* degenerate = nullptr);

}  // namespace spendtraits
