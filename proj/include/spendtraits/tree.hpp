#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "spendtraits/matrix.hpp"
#include "spendtraits/rng.hpp"

namespace spendtraits {

struct TreeNode {
  std::int32_t feature = -1;  // -1 marks a leaf
  double threshold = 0.0;     // goes left when x[feature] <= threshold
  std::int32_t left = -1;
  std::int32_t right = -1;
  std::array<std::int64_t, 2> counts{0, 0};  // training class counts at the node
  double positive_fraction = 0.0;
  double gini = 0.0;

  bool is_leaf() const { return feature < 0; }
};

struct TreeParams {
  int max_depth = -1;  // <= 0 means unlimited
  int min_leaf = 5;    // both children of a split must hold at least this many samples
  int mtry = 0;        // features sampled per split; 0 means all
};

// Binary CART classifier. Splits greedily on Gini reduction; candidate
// thresholds are midpoints of consecutive distinct values. Ties are broken
// toward the lowest feature index, then the lowest threshold, so fits are
// deterministic given input order. Zero-gain splits are taken while the node
// is impure, which lets bounded-depth trees fit parity-style patterns.
class DecisionTree {
 public:
  // `sample_indices` selects the training rows (repeats allowed, e.g. a
  // bootstrap); empty means all rows. `rng` is only consulted for mtry.
  static DecisionTree fit(const Matrix& x, std::span<const int> y, const TreeParams& params,
                          Rng* rng = nullptr, std::span<const std::size_t> sample_indices = {});

  double score(std::span<const double> row) const;  // leaf positive fraction
  const TreeNode& leaf_for(std::span<const double> row) const;

  const std::vector<TreeNode>& nodes() const { return nodes_; }
  const TreeNode& root() const { return nodes_.front(); }
  int depth() const;
  std::size_t leaf_count() const;

  // Adds (node fraction) * (Gini reduction) per split into `out`, indexed by
  // feature. `out` must have one slot per feature.
  void accumulate_importances(std::vector<double>& out) const;

  nlohmann::ordered_json to_json() const;
  static DecisionTree from_json(const nlohmann::json& j);

 private:
  std::vector<TreeNode> nodes_;
};

}  // namespace spendtraits
