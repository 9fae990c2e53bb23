#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "spendtraits/matrix.hpp"

namespace spendtraits {

enum class Penalty : std::uint8_t { L1, L2 };
enum class Link : std::uint8_t { Identity, Logistic };

struct LinearParams {
  Penalty penalty = Penalty::L2;
  double lambda = 0.0;
  Link link = Link::Logistic;
  bool standardize = true;
  int max_iter = 20000;
  double tol = 1e-6;
  // When non-empty, lambda is chosen from this grid by inner cross-validation.
  std::vector<double> lambda_grid;
  int grid_cv_folds = 5;
  std::uint64_t seed = 0;

  nlohmann::ordered_json to_json() const;
  static LinearParams from_json(const nlohmann::json& j);
};

// Lasso/ridge-regularized linear or logistic regression, fit by accelerated
// proximal gradient descent with backtracking. The intercept is never
// penalized. Standardization statistics come from the training split and are
// applied identically at scoring time.
class LinearModel {
 public:
  static LinearModel fit(const Matrix& x, std::span<const double> y, const LinearParams& params);

  // Logistic link returns a probability, identity the linear predictor.
  double score(std::span<const double> row) const;
  std::vector<double> score_rows(const Matrix& x) const;

  const std::vector<double>& weights() const { return weights_; }
  double intercept() const { return intercept_; }
  const LinearParams& params() const { return params_; }
  std::size_t nonzero_weights(double eps = 1e-9) const;

  nlohmann::ordered_json to_json() const;
  static LinearModel from_json(const nlohmann::json& j);

 private:
  std::vector<double> weights_;  // in standardized coordinates
  double intercept_ = 0.0;
  std::vector<double> feature_means_;
  std::vector<double> feature_stds_;
  LinearParams params_;
};

}  // namespace spendtraits
