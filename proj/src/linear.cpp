#include "spendtraits/linear.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>

#include <nlohmann/json.hpp>

#include "spendtraits/metrics.hpp"
#include "spendtraits/rng.hpp"

namespace spendtraits {

namespace {

double soft_threshold(double v, double k) {
  if (v > k) return v - k;
  if (v < -k) return v + k;
  return 0.0;
}

double softplus(double z) {
  // log(1 + e^z) without overflow.
  return z > 0.0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z));
}

double sigmoid(double z) {
  return z > 0.0 ? 1.0 / (1.0 + std::exp(-z)) : std::exp(z) / (1.0 + std::exp(z));
}

struct Problem {
  const Matrix& z;  // standardized design
  std::span<const double> y;
  Link link;
  Penalty penalty;
  double lambda;

  // Smooth part: data loss plus the ridge term when penalty is L2.
  double smooth_loss(const std::vector<double>& w, double b) const {
    const double n = static_cast<double>(z.rows);
    double loss = 0.0;
    for (std::size_t i = 0; i < z.rows; ++i) {
      auto row = z.row(i);
      double pred = b + std::inner_product(row.begin(), row.end(), w.begin(), 0.0);
      if (link == Link::Identity) {
        double r = pred - y[i];
        loss += 0.5 * r * r;
      } else {
        loss += softplus(pred) - y[i] * pred;
      }
    }
    loss /= n;
    if (penalty == Penalty::L2) {
      double sq = 0.0;
      for (double v : w) sq += v * v;
      loss += 0.5 * lambda * sq;
    }
    return loss;
  }

  void smooth_gradient(const std::vector<double>& w, double b, std::vector<double>& gw,
                       double& gb) const {
    const double n = static_cast<double>(z.rows);
    std::fill(gw.begin(), gw.end(), 0.0);
    gb = 0.0;
    for (std::size_t i = 0; i < z.rows; ++i) {
      auto row = z.row(i);
      double pred = b + std::inner_product(row.begin(), row.end(), w.begin(), 0.0);
      double r = link == Link::Identity ? pred - y[i] : sigmoid(pred) - y[i];
      for (std::size_t j = 0; j < w.size(); ++j) gw[j] += r * row[j];
      gb += r;
    }
    for (double& g : gw) g /= n;
    gb /= n;
    if (penalty == Penalty::L2) {
      for (std::size_t j = 0; j < w.size(); ++j) gw[j] += lambda * w[j];
    }
  }

  double objective(const std::vector<double>& w, double b) const {
    double obj = smooth_loss(w, b);
    if (penalty == Penalty::L1) {
      double l1 = 0.0;
      for (double v : w) l1 += std::abs(v);
      obj += lambda * l1;
    }
    return obj;
  }
};

struct Solution {
  std::vector<double> weights;
  double intercept = 0.0;
  int iterations = 0;
  double residual = 0.0;
};

// FISTA with backtracking line search and function-value restarts. The
// intercept rides along unpenalized; L1 enters through the prox step.
Solution solve(const Problem& problem, int max_iter, double tol) {
  const std::size_t m = problem.z.cols;
  Solution sol;
  sol.weights.assign(m, 0.0);

  std::vector<double> w = sol.weights, w_prev = sol.weights, v = sol.weights;
  double b = 0.0, b_prev = 0.0, vb = 0.0;
  double momentum = 1.0;
  double step = 1.0;
  double last_objective = problem.objective(w, b);

  std::vector<double> grad(m, 0.0), candidate(m, 0.0);
  double grad_b = 0.0;

  for (int iter = 1; iter <= max_iter; ++iter) {
    problem.smooth_gradient(v, vb, grad, grad_b);
    double loss_v = problem.smooth_loss(v, vb);

    double candidate_b = 0.0;
    for (;;) {
      double l1_scale = problem.penalty == Penalty::L1 ? step * problem.lambda : 0.0;
      for (std::size_t j = 0; j < m; ++j) {
        double raw = v[j] - step * grad[j];
        candidate[j] = problem.penalty == Penalty::L1 ? soft_threshold(raw, l1_scale) : raw;
      }
      candidate_b = vb - step * grad_b;
      // Majorization check: smooth loss must sit under its quadratic model.
      double lhs = problem.smooth_loss(candidate, candidate_b);
      double dot = 0.0, sq = 0.0;
      for (std::size_t j = 0; j < m; ++j) {
        double d = candidate[j] - v[j];
        dot += grad[j] * d;
        sq += d * d;
      }
      double db = candidate_b - vb;
      dot += grad_b * db;
      sq += db * db;
      if (lhs <= loss_v + dot + sq / (2.0 * step) + 1e-12 || step < 1e-12) break;
      step *= 0.5;
    }

    double residual = std::abs(candidate_b - vb) / step;
    for (std::size_t j = 0; j < m; ++j) {
      residual = std::max(residual, std::abs(candidate[j] - v[j]) / step);
    }

    w_prev = w;
    b_prev = b;
    w = candidate;
    b = candidate_b;

    sol.iterations = iter;
    sol.residual = residual;
    if (residual <= tol) {
      sol.weights = w;
      sol.intercept = b;
      return sol;
    }

    double objective = problem.objective(w, b);
    if (objective > last_objective) {
      // Restart the momentum sequence when acceleration overshoots.
      momentum = 1.0;
      v = w;
      vb = b;
    } else {
      double next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * momentum * momentum));
      double beta = (momentum - 1.0) / next;
      momentum = next;
      for (std::size_t j = 0; j < m; ++j) v[j] = w[j] + beta * (w[j] - w_prev[j]);
      vb = b + beta * (b - b_prev);
    }
    last_objective = std::min(last_objective, objective);
  }
  throw std::runtime_error(
      "LinearModel::fit did not converge: residual " + std::to_string(sol.residual) + " after " +
      std::to_string(sol.iterations) + " iterations (tol " + std::to_string(tol) + ")");
}

Matrix standardized(const Matrix& x, std::vector<double>& means, std::vector<double>& stds) {
  means.assign(x.cols, 0.0);
  stds.assign(x.cols, 1.0);
  const double n = static_cast<double>(x.rows);
  for (std::size_t r = 0; r < x.rows; ++r) {
    auto row = x.row(r);
    for (std::size_t c = 0; c < x.cols; ++c) means[c] += row[c];
  }
  for (double& m : means) m /= n;
  std::vector<double> ss(x.cols, 0.0);
  for (std::size_t r = 0; r < x.rows; ++r) {
    auto row = x.row(r);
    for (std::size_t c = 0; c < x.cols; ++c) {
      double d = row[c] - means[c];
      ss[c] += d * d;
    }
  }
  for (std::size_t c = 0; c < x.cols; ++c) {
    double sd = std::sqrt(ss[c] / n);
    stds[c] = sd > 0.0 ? sd : 1.0;  // constant columns stay centered at zero
  }
  Matrix z(x.rows, x.cols);
  for (std::size_t r = 0; r < x.rows; ++r) {
    auto row = x.row(r);
    auto out = z.row(r);
    for (std::size_t c = 0; c < x.cols; ++c) out[c] = (row[c] - means[c]) / stds[c];
  }
  return z;
}

double grid_validation_score(const Matrix& x, std::span<const double> y, LinearParams params,
                             double lambda, Rng& rng);

double pick_lambda(const Matrix& x, std::span<const double> y, const LinearParams& params) {
  Rng rng = Rng(params.seed).derive("lambda_grid");
  double best_lambda = params.lambda_grid.front();
  double best_score = -std::numeric_limits<double>::infinity();
  for (double lambda : params.lambda_grid) {
    Rng fold_rng = rng;  // identical folds for every lambda
    double score = grid_validation_score(x, y, params, lambda, fold_rng);
    if (score > best_score) {
      best_score = score;
      best_lambda = lambda;
    }
  }
  return best_lambda;
}

// Mean validation quality of `lambda` over k plain (identity) or stratified
// (logistic) folds; higher is better.
double grid_validation_score(const Matrix& x, std::span<const double> y, LinearParams params,
                             double lambda, Rng& rng) {
  const int k = std::max(2, params.grid_cv_folds);
  std::vector<std::size_t> order;
  if (params.link == Link::Logistic) {
    std::vector<std::size_t> pos, neg;
    for (std::size_t i = 0; i < y.size(); ++i) (y[i] > 0.5 ? pos : neg).push_back(i);
    rng.shuffle(pos);
    rng.shuffle(neg);
    order = pos;
    order.insert(order.end(), neg.begin(), neg.end());
  } else {
    order.resize(y.size());
    std::iota(order.begin(), order.end(), 0);
    rng.shuffle(order);
  }
  std::vector<int> fold_of(y.size());
  for (std::size_t i = 0; i < order.size(); ++i) fold_of[order[i]] = static_cast<int>(i % k);

  params.lambda = lambda;
  params.lambda_grid.clear();

  double total = 0.0;
  for (int f = 0; f < k; ++f) {
    std::vector<std::size_t> train_idx, val_idx;
    for (std::size_t i = 0; i < y.size(); ++i) (fold_of[i] == f ? val_idx : train_idx).push_back(i);
    Matrix x_train = x.select_rows(train_idx);
    std::vector<double> y_train;
    for (std::size_t i : train_idx) y_train.push_back(y[i]);
    LinearModel model = LinearModel::fit(x_train, y_train, params);
    std::vector<double> scores;
    for (std::size_t i : val_idx) scores.push_back(model.score(x.row(i)));
    if (params.link == Link::Logistic) {
      std::vector<int> labels;
      for (std::size_t i : val_idx) labels.push_back(y[i] > 0.5 ? 1 : 0);
      total += auc(scores, labels);
    } else {
      double mse = 0.0;
      for (std::size_t j = 0; j < val_idx.size(); ++j) {
        double r = scores[j] - y[val_idx[j]];
        mse += r * r;
      }
      total += -mse / static_cast<double>(val_idx.size());
    }
  }
  return total / static_cast<double>(k);
}

}  // namespace

nlohmann::ordered_json LinearParams::to_json() const {
  return nlohmann::ordered_json{
      {"penalty", penalty == Penalty::L1 ? "l1" : "l2"},
      {"lambda", lambda},
      {"link", link == Link::Identity ? "identity" : "logistic"},
      {"standardize", standardize},
      {"max_iter", max_iter},
      {"tol", tol},
      {"lambda_grid", lambda_grid},
      {"grid_cv_folds", grid_cv_folds},
      {"seed", seed}};
}

LinearParams LinearParams::from_json(const nlohmann::json& j) {
  LinearParams p;
  std::string penalty = j.at("penalty").get<std::string>();
  if (penalty == "l1") p.penalty = Penalty::L1;
  else if (penalty == "l2") p.penalty = Penalty::L2;
  else throw std::runtime_error("linear params: unknown penalty '" + penalty + "'");
  std::string link = j.at("link").get<std::string>();
  if (link == "identity") p.link = Link::Identity;
  else if (link == "logistic") p.link = Link::Logistic;
  else throw std::runtime_error("linear params: unknown link '" + link + "'");
  p.lambda = j.at("lambda").get<double>();
  p.standardize = j.at("standardize").get<bool>();
  p.max_iter = j.at("max_iter").get<int>();
  p.tol = j.at("tol").get<double>();
  p.lambda_grid = j.value("lambda_grid", std::vector<double>{});
  p.grid_cv_folds = j.value("grid_cv_folds", 5);
  p.seed = j.value("seed", std::uint64_t{0});
  return p;
}

LinearModel LinearModel::fit(const Matrix& x, std::span<const double> y,
                             const LinearParams& params) {
  if (x.rows == 0 || x.cols == 0) throw std::invalid_argument("LinearModel::fit: empty data");
  if (y.size() != x.rows) throw std::invalid_argument("LinearModel::fit: X/y size mismatch");
  if (params.lambda < 0.0) throw std::invalid_argument("LinearModel::fit: negative lambda");
  if (params.link == Link::Logistic) {
    for (double v : y) {
      if (v != 0.0 && v != 1.0) {
        throw std::invalid_argument("LinearModel::fit: logistic link needs 0/1 targets");
      }
    }
  }

  LinearModel model;
  model.params_ = params;
  if (!params.lambda_grid.empty()) {
    model.params_.lambda = pick_lambda(x, y, params);
    model.params_.lambda_grid.clear();
  }

  Matrix z;
  if (params.standardize) {
    z = standardized(x, model.feature_means_, model.feature_stds_);
  } else {
    z = x;
    model.feature_means_.assign(x.cols, 0.0);
    model.feature_stds_.assign(x.cols, 1.0);
  }

  Problem problem{z, y, model.params_.link, model.params_.penalty, model.params_.lambda};
  Solution sol = solve(problem, model.params_.max_iter, model.params_.tol);
  model.weights_ = std::move(sol.weights);
  model.intercept_ = sol.intercept;
  return model;
}

double LinearModel::score(std::span<const double> row) const {
  double pred = intercept_;
  for (std::size_t j = 0; j < weights_.size(); ++j) {
    pred += weights_[j] * (row[j] - feature_means_[j]) / feature_stds_[j];
  }
  return params_.link == Link::Logistic ? sigmoid(pred) : pred;
}

std::vector<double> LinearModel::score_rows(const Matrix& x) const {
  std::vector<double> out;
  out.reserve(x.rows);
  for (std::size_t r = 0; r < x.rows; ++r) out.push_back(score(x.row(r)));
  return out;
}

std::size_t LinearModel::nonzero_weights(double eps) const {
  std::size_t count = 0;
  for (double w : weights_) count += std::abs(w) > eps;
  return count;
}

nlohmann::ordered_json LinearModel::to_json() const {
  return nlohmann::ordered_json{{"format_version", 1},
                                {"kind", "linear"},
                                {"params", params_.to_json()},
                                {"weights", weights_},
                                {"intercept", intercept_},
                                {"feature_means", feature_means_},
                                {"feature_stds", feature_stds_}};
}

LinearModel LinearModel::from_json(const nlohmann::json& j) {
  if (j.at("format_version").get<int>() != 1) {
    throw std::runtime_error("linear model: unsupported format version");
  }
  if (j.at("kind").get<std::string>() != "linear") {
    throw std::runtime_error("linear model: unexpected kind");
  }
  LinearModel model;
  model.params_ = LinearParams::from_json(j.at("params"));
  model.weights_ = j.at("weights").get<std::vector<double>>();
  model.intercept_ = j.at("intercept").get<double>();
  model.feature_means_ = j.at("feature_means").get<std::vector<double>>();
  model.feature_stds_ = j.at("feature_stds").get<std::vector<double>>();
  return model;
}

}  // namespace spendtraits
