#include "spendtraits/cv.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <numeric>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "spendtraits/metrics.hpp"
#include "spendtraits/rng.hpp"

namespace spendtraits {

CvPlan CvPlan::stratified(std::span<const int> labels, int k, std::uint64_t seed) {
  if (k < 2) throw std::invalid_argument("CvPlan: need at least 2 folds");
  if (labels.size() < static_cast<std::size_t>(k)) {
    throw std::invalid_argument("CvPlan: fewer samples than folds");
  }
  Rng rng = Rng(seed).derive("cv_plan");
  std::vector<std::size_t> pos, neg;
  for (std::size_t i = 0; i < labels.size(); ++i) (labels[i] == 1 ? pos : neg).push_back(i);
  rng.shuffle(pos);
  rng.shuffle(neg);

  CvPlan plan;
  plan.seed = seed;
  plan.folds.assign(static_cast<std::size_t>(k), {});
  std::size_t cursor = 0;
  for (std::size_t i : pos) plan.folds[cursor++ % static_cast<std::size_t>(k)].push_back(i);
  for (std::size_t i : neg) plan.folds[cursor++ % static_cast<std::size_t>(k)].push_back(i);
  for (auto& fold : plan.folds) std::sort(fold.begin(), fold.end());
  return plan;
}

nlohmann::ordered_json LearnerSpec::to_json() const {
  return nlohmann::ordered_json{{"kind", kind == Kind::Forest ? "forest" : "linear"},
                                {"forest", forest.to_json()},
                                {"linear", linear.to_json()}};
}

LearnerSpec LearnerSpec::from_json(const nlohmann::json& j) {
  LearnerSpec spec;
  std::string kind = j.at("kind").get<std::string>();
  if (kind == "forest") spec.kind = Kind::Forest;
  else if (kind == "linear") spec.kind = Kind::Linear;
  else throw std::runtime_error("learner spec: unknown kind '" + kind + "'");
  if (j.contains("forest")) spec.forest = ForestParams::from_json(j.at("forest"));
  if (j.contains("linear")) spec.linear = LinearParams::from_json(j.at("linear"));
  return spec;
}

nlohmann::ordered_json CvResult::to_json() const {
  return nlohmann::ordered_json{{"fold_aucs", fold_aucs}, {"mean_auc", mean_auc}};
}

namespace {

Classifier fit_on(const Matrix& x, std::span<const int> y, const LearnerSpec& spec,
                  std::uint64_t seed_override, bool use_override) {
  double prevalence = 0.0;
  for (int v : y) prevalence += v;
  prevalence /= static_cast<double>(y.size());

  Classifier clf;
  if (spec.kind == LearnerSpec::Kind::Forest) {
    ForestParams params = spec.forest;
    if (use_override) params.seed = seed_override;
    auto model = std::make_shared<ForestModel>(ForestModel::fit(x, y, params));
    clf.score = [model](std::span<const double> row) { return model->score(row); };
  } else {
    LinearParams params = spec.linear;
    if (use_override) params.seed = seed_override;
    std::vector<double> targets(y.begin(), y.end());
    auto model = std::make_shared<LinearModel>(LinearModel::fit(x, targets, params));
    clf.score = [model](std::span<const double> row) { return model->score(row); };
  }

  std::vector<double> train_scores;
  train_scores.reserve(x.rows);
  for (std::size_t r = 0; r < x.rows; ++r) train_scores.push_back(clf.score(x.row(r)));
  bool constant = std::all_of(train_scores.begin(), train_scores.end(),
                              [&](double s) { return s == train_scores.front(); });
  // A constant scorer cannot rank; leave the threshold at the constant so the
  // classifier predicts the default class everywhere.
  clf.threshold = constant ? train_scores.front() : choose_threshold(train_scores, prevalence);
  return clf;
}

}  // namespace

CvResult cross_validate(const Matrix& x, std::span<const int> y, const LearnerSpec& spec, int k,
                        std::uint64_t seed) {
  CvPlan plan = CvPlan::stratified(y, k, seed);
  CvResult result;
  for (std::size_t f = 0; f < plan.folds.size(); ++f) {
    std::vector<std::size_t> train_idx;
    for (std::size_t g = 0; g < plan.folds.size(); ++g) {
      if (g == f) continue;
      train_idx.insert(train_idx.end(), plan.folds[g].begin(), plan.folds[g].end());
    }
    std::sort(train_idx.begin(), train_idx.end());
    const auto& test_idx = plan.folds[f];

    std::vector<int> y_train = select(std::vector<int>(y.begin(), y.end()), train_idx);
    std::vector<int> y_test = select(std::vector<int>(y.begin(), y.end()), test_idx);
    bool has_pos = std::any_of(y_test.begin(), y_test.end(), [](int v) { return v == 1; });
    bool has_neg = std::any_of(y_test.begin(), y_test.end(), [](int v) { return v == 0; });
    if (!has_pos || !has_neg) {
      throw std::runtime_error("cross_validate: fold " + std::to_string(f) +
                               " is single-class after stratification");
    }

    Matrix x_train = x.select_rows(train_idx);
    Classifier clf = fit_on(x_train, y_train, spec, Rng(seed).derive("cv_fold", f).seed(), true);
    std::vector<double> scores;
    scores.reserve(test_idx.size());
    for (std::size_t i : test_idx) scores.push_back(clf.score(x.row(i)));
    result.fold_aucs.push_back(auc(scores, y_test));
  }
  result.mean_auc = std::accumulate(result.fold_aucs.begin(), result.fold_aucs.end(), 0.0) /
                    static_cast<double>(result.fold_aucs.size());
  return result;
}

Classifier fit_classifier(const Matrix& x, std::span<const int> y, const LearnerSpec& spec) {
  return fit_on(x, y, spec, 0, false);
}

SplitPlan SplitPlan::stratified(std::span<const int> labels, double train_fraction,
                                std::uint64_t seed) {
  if (train_fraction <= 0.0 || train_fraction >= 1.0) {
    throw std::invalid_argument("SplitPlan: train fraction must be in (0, 1)");
  }
  Rng rng = Rng(seed).derive("train_test_split");
  std::vector<std::size_t> pos, neg;
  for (std::size_t i = 0; i < labels.size(); ++i) (labels[i] == 1 ? pos : neg).push_back(i);
  rng.shuffle(pos);
  rng.shuffle(neg);

  SplitPlan plan;
  auto deal = [&](const std::vector<std::size_t>& group) {
    auto n_train = static_cast<std::size_t>(
        std::llround(train_fraction * static_cast<double>(group.size())));
    n_train = std::min(n_train, group.size());
    for (std::size_t i = 0; i < group.size(); ++i) {
      (i < n_train ? plan.train : plan.test).push_back(group[i]);
    }
  };
  deal(pos);
  deal(neg);
  std::sort(plan.train.begin(), plan.train.end());
  std::sort(plan.test.begin(), plan.test.end());
  return plan;
}

}  // namespace spendtraits
