#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "spendtraits/features.hpp"
#include "spendtraits/forest.hpp"
#include "spendtraits/matrix.hpp"

namespace spendtraits {

enum class ReferenceStrategy : std::uint8_t { Median, Mean, Mode };

// Per-feature replacement values, computed from the training split only.
struct ReferenceValues {
  std::vector<double> values;
  ReferenceStrategy strategy = ReferenceStrategy::Median;

  nlohmann::ordered_json to_json() const;
  static ReferenceValues from_json(const nlohmann::json& j);
};

ReferenceValues compute_reference_values(const Matrix& x_train,
                                         ReferenceStrategy strategy = ReferenceStrategy::Median);

struct SedcOptions {
  std::size_t max_size = 30;
  std::size_t max_evals = 50000;
  // When > 0, the search is restricted to this many candidates, keeping the
  // ones whose singleton replacement lowers the score the most.
  std::size_t max_candidates = 0;
};

struct CounterfactualExplanation {
  std::string person_id;
  std::vector<std::size_t> features;  // insertion order of the search
  std::vector<double> original_values;
  std::vector<double> reference_values;
  double original_score = 0.0;
  double cf_score = 0.0;
  std::size_t evaluations = 0;

  nlohmann::ordered_json to_json(const FeatureRegistry& registry) const;
};

struct SedcResult {
  // Empty when the instance is not explainable within the budgets.
  std::optional<CounterfactualExplanation> explanation;
  double best_score_reached = 0.0;
  std::size_t evaluations = 0;
};

// Best-first search for a feature set whose replacement by the reference
// values flips the model's decision. The frontier always expands the subset
// with the lowest achieved score; the first flipping subset is pruned to an
// irreducible set (insertion-order scans until no member can be dropped).
// Deterministic: ties break toward the lexicographically smallest subset.
// Requires that the model classifies x positive.
SedcResult sedc_explain(std::span<const double> x, const Classifier& model,
                        const ReferenceValues& refs, const SedcOptions& options = {},
                        const std::string& person_id = {});

// The candidate features sedc_explain would search over: features whose value
// differs from the reference, restricted (when max_candidates > 0) to the
// ones whose singleton replacement lowers the score the most.
std::vector<std::size_t> sedc_candidate_set(std::span<const double> x, const Classifier& model,
                                            const ReferenceValues& refs,
                                            std::size_t max_candidates = 0);

// "If you had spent less frequently in A and B, ... -> then you would not
// have been predicted as <label>" — direction per feature is the sign of the
// reference-vs-original change.
std::string render_counterfactual(const CounterfactualExplanation& expl,
                                  const FeatureRegistry& registry,
                                  const std::string& positive_label);

struct SimilaritySummary {
  double mean = 0.0;
  std::vector<std::size_t> histogram;  // 10 equal-width bins over [0, 1]
  std::size_t pairs = 0;
  bool sampled = false;

  nlohmann::ordered_json to_json() const;
};

// Jaccard overlap over unordered pairs of explanations; above `pair_cap`
// pairs a seeded sample of that size is used instead.
SimilaritySummary pairwise_similarity(const std::vector<CounterfactualExplanation>& expls,
                                      std::size_t pair_cap = 200000, std::uint64_t seed = 0);

struct ExplanationAnalytics {
  double mean_size = 0.0;
  double median_size = 0.0;
  double size_fraction = 0.0;  // mean size over the number of features
  double uniqueness = 0.0;     // fraction of feature sets occurring exactly once
  double score_size_pearson = 0.0;
  bool pearson_degenerate = false;
  double tp_mean_size = 0.0;
  double fp_mean_size = 0.0;
  std::size_t tp_count = 0;
  std::size_t fp_count = 0;
  bool degenerate = false;  // fewer than two explanations

  nlohmann::ordered_json to_json() const;
};

// `true_labels[i]` is the ground truth for the person behind `expls[i]`; all
// explained instances are predicted positives, so labels split them into
// true and false positives.
ExplanationAnalytics explanation_analytics(const std::vector<CounterfactualExplanation>& expls,
                                           std::span<const int> true_labels,
                                           std::size_t n_features);

}  // namespace spendtraits
