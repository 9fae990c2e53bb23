#include "spendtraits/forest.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "spendtraits/rng.hpp"

namespace spendtraits {

nlohmann::ordered_json ForestParams::to_json() const {
  return nlohmann::ordered_json{{"n_trees", n_trees},
                                {"max_depth", max_depth},
                                {"min_leaf", min_leaf},
                                {"mtry", mtry},
                                {"seed", seed}};
}

ForestParams ForestParams::from_json(const nlohmann::json& j) {
  ForestParams p;
  p.n_trees = j.at("n_trees").get<int>();
  p.max_depth = j.at("max_depth").get<int>();
  p.min_leaf = j.at("min_leaf").get<int>();
  p.mtry = j.at("mtry").get<int>();
  p.seed = j.at("seed").get<std::uint64_t>();
  return p;
}

ForestModel ForestModel::fit(const Matrix& x, std::span<const int> y, const ForestParams& params) {
  if (params.n_trees < 1) throw std::invalid_argument("ForestModel::fit: n_trees must be >= 1");
  if (x.rows == 0) throw std::invalid_argument("ForestModel::fit: empty data");

  ForestModel model;
  model.params_ = params;
  model.n_features_ = x.cols;
  if (model.params_.mtry <= 0) {
    model.params_.mtry = static_cast<int>(std::ceil(std::sqrt(static_cast<double>(x.cols))));
  }

  TreeParams tree_params;
  tree_params.max_depth = params.max_depth;
  tree_params.min_leaf = params.min_leaf;
  tree_params.mtry = model.params_.mtry;

  Rng root(params.seed);
  model.trees_.reserve(static_cast<std::size_t>(params.n_trees));
  for (int t = 0; t < params.n_trees; ++t) {
    Rng tree_rng = root.derive("tree", static_cast<std::uint64_t>(t));
    model.tree_seeds_.push_back(tree_rng.seed());
    std::vector<std::size_t> bootstrap(x.rows);
    for (auto& idx : bootstrap) idx = static_cast<std::size_t>(tree_rng.below(x.rows));
    model.trees_.push_back(DecisionTree::fit(x, y, tree_params, &tree_rng, bootstrap));
  }
  return model;
}

double ForestModel::score(std::span<const double> row) const {
  double sum = 0.0;
  for (const auto& tree : trees_) sum += tree.score(row);
  return sum / static_cast<double>(trees_.size());
}

std::vector<double> ForestModel::score_rows(const Matrix& x) const {
  std::vector<double> scores;
  scores.reserve(x.rows);
  for (std::size_t r = 0; r < x.rows; ++r) scores.push_back(score(x.row(r)));
  return scores;
}

std::vector<double> ForestModel::feature_importances(bool* degenerate) const {
  std::vector<double> sums(n_features_, 0.0);
  for (const auto& tree : trees_) tree.accumulate_importances(sums);
  double total = 0.0;
  for (double v : sums) total += v;
  if (degenerate) *degenerate = total <= 0.0;
  if (total <= 0.0) return sums;  // all-zero: every tree is a pure root
  for (double& v : sums) v /= total;
  return sums;
}

Classifier ForestModel::classifier() const {
  return Classifier{[this](std::span<const double> row) { return score(row); }, threshold_};
}

nlohmann::ordered_json ForestModel::to_json() const {
  nlohmann::ordered_json trees = nlohmann::ordered_json::array();
  for (const auto& tree : trees_) trees.push_back(tree.to_json());
  return nlohmann::ordered_json{{"format_version", 1},
                                {"kind", "random_forest"},
                                {"params", params_.to_json()},
                                {"n_features", n_features_},
                                {"threshold", threshold_},
                                {"tree_seeds", tree_seeds_},
                                {"trees", trees}};
}

ForestModel ForestModel::from_json(const nlohmann::json& j) {
  if (j.at("format_version").get<int>() != 1) {
    throw std::runtime_error("forest model: unsupported format version");
  }
  if (j.at("kind").get<std::string>() != "random_forest") {
    throw std::runtime_error("forest model: unexpected kind");
  }
  ForestModel model;
  model.params_ = ForestParams::from_json(j.at("params"));
  model.n_features_ = j.at("n_features").get<std::size_t>();
  model.threshold_ = j.at("threshold").get<double>();
  model.tree_seeds_ = j.at("tree_seeds").get<std::vector<std::uint64_t>>();
  for (const auto& t : j.at("trees")) model.trees_.push_back(DecisionTree::from_json(t));
  if (model.trees_.empty()) throw std::runtime_error("forest model: no trees");
  return model;
}

std::vector<RankedFeature> ranked_importances(const ForestModel& model, bool* degenerate) {
  auto weights = model.feature_importances(degenerate);
  std::vector<RankedFeature> ranked;
  ranked.reserve(weights.size());
  for (std::size_t f = 0; f < weights.size(); ++f) ranked.push_back({f, weights[f]});
  std::stable_sort(ranked.begin(), ranked.end(), [](const RankedFeature& a, const RankedFeature& b) {
    return a.weight > b.weight;
  });
  return ranked;
}

}  // namespace spendtraits
