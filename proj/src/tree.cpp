#include "spendtraits/tree.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace spendtraits {

namespace {

double gini_impurity(std::int64_t c0, std::int64_t c1) {
  double n = static_cast<double>(c0 + c1);
  if (n == 0.0) return 0.0;
  double p0 = static_cast<double>(c0) / n;
  double p1 = static_cast<double>(c1) / n;
  return 1.0 - p0 * p0 - p1 * p1;
}

struct SplitChoice {
  bool found = false;
  std::size_t feature = 0;
  double threshold = 0.0;
  double improvement = -1.0;
};

class TreeBuilder {
 public:
  TreeBuilder(const Matrix& x, std::span<const int> y, const TreeParams& params, Rng* rng)
      : x_(x), y_(y), params_(params), rng_(rng) {}

  std::vector<TreeNode> build(std::vector<std::size_t> samples) {
    nodes_.clear();
    grow(std::move(samples), 0);
    return std::move(nodes_);
  }

 private:
  std::int32_t grow(std::vector<std::size_t> samples, int depth) {
    TreeNode node;
    for (std::size_t i : samples) node.counts[static_cast<std::size_t>(y_[i])] += 1;
    node.gini = gini_impurity(node.counts[0], node.counts[1]);
    double n = static_cast<double>(samples.size());
    node.positive_fraction = static_cast<double>(node.counts[1]) / n;

    bool pure = node.counts[0] == 0 || node.counts[1] == 0;
    bool depth_capped = params_.max_depth > 0 && depth >= params_.max_depth;
    bool too_small = samples.size() < 2 * static_cast<std::size_t>(params_.min_leaf);
    SplitChoice split;
    if (!pure && !depth_capped && !too_small) split = best_split(samples, node.gini);

    auto id = static_cast<std::int32_t>(nodes_.size());
    nodes_.push_back(node);
    if (!split.found) return id;

    std::vector<std::size_t> left, right;
    left.reserve(samples.size());
    right.reserve(samples.size());
    for (std::size_t i : samples) {
      (x_.at(i, split.feature) <= split.threshold ? left : right).push_back(i);
    }
    samples.clear();
    samples.shrink_to_fit();

    nodes_[static_cast<std::size_t>(id)].feature = static_cast<std::int32_t>(split.feature);
    nodes_[static_cast<std::size_t>(id)].threshold = split.threshold;
    std::int32_t left_id = grow(std::move(left), depth + 1);
    nodes_[static_cast<std::size_t>(id)].left = left_id;
    std::int32_t right_id = grow(std::move(right), depth + 1);
    nodes_[static_cast<std::size_t>(id)].right = right_id;
    return id;
  }

  std::vector<std::size_t> candidate_features() {
    const std::size_t m = x_.cols;
    std::vector<std::size_t> features(m);
    for (std::size_t f = 0; f < m; ++f) features[f] = f;
    if (params_.mtry > 0 && static_cast<std::size_t>(params_.mtry) < m) {
      if (!rng_) throw std::logic_error("DecisionTree: mtry requires an rng");
      // Partial Fisher-Yates, then sort so iteration order stays ascending.
      for (std::size_t i = 0; i < static_cast<std::size_t>(params_.mtry); ++i) {
        std::size_t j = i + static_cast<std::size_t>(rng_->below(m - i));
        std::swap(features[i], features[j]);
      }
      features.resize(static_cast<std::size_t>(params_.mtry));
      std::sort(features.begin(), features.end());
    }
    return features;
  }

  SplitChoice best_split(const std::vector<std::size_t>& samples, double node_gini) {
    SplitChoice best;
    const double n = static_cast<double>(samples.size());
    const auto min_leaf = static_cast<std::size_t>(params_.min_leaf);

    std::vector<std::pair<double, int>> values;
    values.reserve(samples.size());
    for (std::size_t f : candidate_features()) {
      values.clear();
      for (std::size_t i : samples) values.emplace_back(x_.at(i, f), y_[i]);
      std::sort(values.begin(), values.end(),
                [](const auto& a, const auto& b) { return a.first < b.first; });
      if (values.front().first == values.back().first) continue;

      std::int64_t left_c0 = 0, left_c1 = 0;
      std::int64_t total_c1 = 0;
      for (const auto& [v, label] : values) total_c1 += label;
      const std::int64_t total_c0 = static_cast<std::int64_t>(values.size()) - total_c1;

      for (std::size_t i = 0; i + 1 < values.size(); ++i) {
        left_c0 += values[i].second == 0;
        left_c1 += values[i].second == 1;
        if (values[i].first == values[i + 1].first) continue;
        std::size_t n_left = i + 1;
        std::size_t n_right = values.size() - n_left;
        if (n_left < min_leaf || n_right < min_leaf) continue;
        double gini_left = gini_impurity(left_c0, left_c1);
        double gini_right = gini_impurity(total_c0 - left_c0, total_c1 - left_c1);
        double improvement = node_gini - (static_cast<double>(n_left) / n) * gini_left -
                             (static_cast<double>(n_right) / n) * gini_right;
        if (improvement > best.improvement) {
          best.found = true;
          best.feature = f;
          best.threshold = values[i].first + 0.5 * (values[i + 1].first - values[i].first);
          best.improvement = improvement;
        }
      }
    }
    // Negative best gains can only come from rounding; treat them as zero-gain.
    if (best.found && best.improvement < 0.0) best.improvement = 0.0;
    return best;
  }

  const Matrix& x_;
  std::span<const int> y_;
  const TreeParams& params_;
  Rng* rng_;
  std::vector<TreeNode> nodes_;
};

}  // namespace

DecisionTree DecisionTree::fit(const Matrix& x, std::span<const int> y, const TreeParams& params,
                               Rng* rng, std::span<const std::size_t> sample_indices) {
  if (x.rows == 0 || x.cols == 0) throw std::invalid_argument("DecisionTree:fit: empty data");
  if (y.size() != x.rows) throw std::invalid_argument("DecisionTree::fit: X/y size mismatch");
  for (int label : y) {
    if (label != 0 && label != 1) throw std::invalid_argument("DecisionTree::fit: labels must be 0/1");
  }
  if (params.min_leaf < 1) throw std::invalid_argument("DecisionTree::fit: min_leaf must be >= 1");

  std::vector<std::size_t> samples;
  if (sample_indices.empty()) {
    samples.resize(x.rows);
    for (std::size_t i = 0; i < x.rows; ++i) samples[i] = i;
  } else {
    samples.assign(sample_indices.begin(), sample_indices.end());
    for (std::size_t i : samples) {
      if (i >= x.rows) throw std::out_of_range("DecisionTree::fit: sample index out of range");
    }
  }

  DecisionTree tree;
  TreeBuilder builder(x, y, params, rng);
  tree.nodes_ = builder.build(std::move(samples));
  return tree;
}

const TreeNode& DecisionTree::leaf_for(std::span<const double> row) const {
  const TreeNode* cur = &nodes_.front();
  while (!cur->is_leaf()) {
    cur = row[static_cast<std::size_t>(cur->feature)] <= cur->threshold
              ? &nodes_[static_cast<std::size_t>(cur->left)]
              : &nodes_[static_cast<std::size_t>(cur->right)];
  }
  return *cur;
}

double DecisionTree::score(std::span<const double> row) const {
  return leaf_for(row).positive_fraction;
}

int DecisionTree::depth() const {
  // Depth of a node = number of edges from the root.
  std::vector<int> depths(nodes_.size(), 0);
  int max_depth = 0;
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    const TreeNode& node = nodes_[i];
    if (node.is_leaf()) {
      max_depth = std::max(max_depth, depths[i]);
    } else {
      depths[static_cast<std::size_t>(node.left)] = depths[i] + 1;
      depths[static_cast<std::size_t>(node.right)] = depths[i] + 1;
    }
  }
  return max_depth;
}

std::size_t DecisionTree::leaf_count() const {
  std::size_t count = 0;
  for (const auto& node : nodes_) count += node.is_leaf();
  return count;
}

void DecisionTree::accumulate_importances(std::vector<double>& out) const {
  const double total = static_cast<double>(nodes_.front().counts[0] + nodes_.front().counts[1]);
  for (const auto& node : nodes_) {
    if (node.is_leaf()) continue;
    const TreeNode& l = nodes_[static_cast<std::size_t>(node.left)];
    const TreeNode& r = nodes_[static_cast<std::size_t>(node.right)];
    double n = static_cast<double>(node.counts[0] + node.counts[1]);
    double nl = static_cast<double>(l.counts[0] + l.counts[1]);
    double nr = static_cast<double>(r.counts[0] + r.counts[1]);
    double reduction = node.gini - (nl / n) * l.gini - (nr / n) * r.gini;
    out.at(static_cast<std::size_t>(node.feature)) += (n / total) * reduction;
  }
}

nlohmann::ordered_json DecisionTree::to_json() const {
  nlohmann::ordered_json nodes = nlohmann::ordered_json::array();
  for (const auto& node : nodes_) {
    nodes.push_back({{"feature", node.feature},
                     {"threshold", node.threshold},
                     {"left", node.left},
                     {"right", node.right},
                     {"counts", node.counts},
                     {"positive_fraction", node.positive_fraction},
                     {"gini", node.gini}});
  }
  return nlohmann::ordered_json{{"nodes", nodes}};
}

DecisionTree DecisionTree::from_json(const nlohmann::json& j) {
  DecisionTree tree;
  for (const auto& n : j.at("nodes")) {
    TreeNode node;
    node.feature = n.at("feature").get<std::int32_t>();
    node.threshold = n.at("threshold").get<double>();
    node.left = n.at("left").get<std::int32_t>();
    node.right = n.at("right").get<std::int32_t>();
    node.counts = n.at("counts").get<std::array<std::int64_t, 2>>();
    node.positive_fraction = n.at("positive_fraction").get<double>();
    node.gini = n.at("gini").get<double>();
    tree.nodes_.push_back(node);
  }
  if (tree.nodes_.empty()) throw std::runtime_error("DecisionTree::from_json: no nodes");
  return tree;
}

}  // namespace spendtraits
