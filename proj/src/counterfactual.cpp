#include "spendtraits/counterfactual.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "spendtraits/metrics.hpp"
#include "spendtraits/rng.hpp"

namespace spendtraits {

namespace {

const char* strategy_label(ReferenceStrategy s) {
  switch (s) {
    case ReferenceStrategy::Median: return "median";
    case ReferenceStrategy::Mean: return "mean";
    case ReferenceStrategy::Mode: return "mode";
  }
  return "unknown";
}

double column_median(std::vector<double>& column) {
  std::sort(column.begin(), column.end());
  std::size_t n = column.size();
  if (n % 2 == 1) return column[n / 2];
  return 0.5 * (column[n / 2 - 1] + column[n / 2]);
}

double column_mode(std::vector<double>& column) {
  // Most frequent value; ties resolve to the smallest.
  std::sort(column.begin(), column.end());
  double best_value = column.front();
  std::size_t best_run = 0;
  std::size_t i = 0;
  while (i < column.size()) {
    std::size_t j = i;
    while (j + 1 < column.size() && column[j + 1] == column[i]) ++j;
    std::size_t run = j - i + 1;
    if (run > best_run) {
      best_run = run;
      best_value = column[i];
    }
    i = j + 1;
  }
  return best_value;
}

}  // namespace

nlohmann::ordered_json ReferenceValues::to_json() const {
  return nlohmann::ordered_json{{"strategy", strategy_label(strategy)}, {"values", values}};
}

ReferenceValues ReferenceValues::from_json(const nlohmann::json& j) {
  ReferenceValues refs;
  std::string strategy = j.at("strategy").get<std::string>();
  if (strategy == "median") refs.strategy = ReferenceStrategy::Median;
  else if (strategy == "mean") refs.strategy = ReferenceStrategy::Mean;
  else if (strategy == "mode") refs.strategy = ReferenceStrategy::Mode;
  else throw std::runtime_error("reference values: unknown strategy '" + strategy + "'");
  refs.values = j.at("values").get<std::vector<double>>();
  return refs;
}

ReferenceValues compute_reference_values(const Matrix& x_train, ReferenceStrategy strategy) {
  if (x_train.rows == 0) throw std::invalid_argument("reference values: empty training split");
  ReferenceValues refs;
  refs.strategy = strategy;
  refs.values.resize(x_train.cols);
  std::vector<double> column(x_train.rows);
  for (std::size_t c = 0; c < x_train.cols; ++c) {
    for (std::size_t r = 0; r < x_train.rows; ++r) column[r] = x_train.at(r, c);
    switch (strategy) {
      case ReferenceStrategy::Median:
        refs.values[c] = column_median(column);
        break;
      case ReferenceStrategy::Mean: {
        double sum = 0.0;
        for (double v : column) sum += v;
        refs.values[c] = sum / static_cast<double>(column.size());
        break;
      }
      case ReferenceStrategy::Mode:
        refs.values[c] = column_mode(column);
        break;
    }
  }
  return refs;
}

namespace {

struct SearchNode {
  double score = 0.0;
  std::vector<std::size_t> insertion;  // features in the order the search added them
  std::vector<std::size_t> sorted;
};

struct NodeOrder {
  bool operator()(const SearchNode& a, const SearchNode& b) const {
    if (a.score != b.score) return a.score < b.score;
    return a.sorted < b.sorted;
  }
};

class Replacer {
 public:
  Replacer(std::span<const double> x, const ReferenceValues& refs, const Classifier& model)
      : work_(x.begin(), x.end()), x_(x), refs_(refs), model_(model) {}

  double score_with(std::span<const std::size_t> replaced) {
    for (std::size_t j : replaced) work_[j] = refs_.values[j];
    double s = model_.score(work_);
    for (std::size_t j : replaced) work_[j] = x_[j];
    return s;
  }

 private:
  std::vector<double> work_;
  std::span<const double> x_;
  const ReferenceValues& refs_;
  const Classifier& model_;
};

}  // namespace

std::vector<std::size_t> sedc_candidate_set(std::span<const double> x, const Classifier& model,
                                            const ReferenceValues& refs,
                                            std::size_t max_candidates) {
  if (x.size() != refs.values.size()) {
    throw std::invalid_argument("sedc_candidate_set: instance/reference size mismatch");
  }
  std::vector<std::size_t> candidates;
  for (std::size_t j = 0; j < x.size(); ++j) {
    if (x[j] != refs.values[j]) candidates.push_back(j);
  }
  if (max_candidates == 0 || candidates.size() <= max_candidates) return candidates;

  Replacer replacer(x, refs, model);
  std::vector<std::pair<double, std::size_t>> ranked;
  ranked.reserve(candidates.size());
  for (std::size_t j : candidates) {
    std::size_t single[1] = {j};
    ranked.emplace_back(replacer.score_with(single), j);
  }
  std::stable_sort(ranked.begin(), ranked.end());
  ranked.resize(max_candidates);
  std::vector<std::size_t> keep;
  for (const auto& [s, j] : ranked) keep.push_back(j);
  std::sort(keep.begin(), keep.end());
  return keep;
}

SedcResult sedc_explain(std::span<const double> x, const Classifier& model,
                        const ReferenceValues& refs, const SedcOptions& options,
                        const std::string& person_id) {
  if (x.size() != refs.values.size()) {
    throw std::invalid_argument("sedc_explain: instance/reference size mismatch");
  }
  if (options.max_size < 1) throw std::invalid_argument("sedc_explain: max_size must be >= 1");
  if (!model.predict(x)) {
    throw std::invalid_argument("sedc_explain: instance is not classified positive");
  }

  SedcResult result;
  const double threshold = model.threshold;
  const double original_score = model.score(x);
  result.best_score_reached = original_score;

  std::vector<std::size_t> candidates;
  for (std::size_t j = 0; j < x.size(); ++j) {
    if (x[j] != refs.values[j]) candidates.push_back(j);
  }
  if (candidates.empty()) return result;  // nothing to replace, not explainable

  Replacer replacer(x, refs, model);
  std::size_t evals = 0;
  auto out_of_budget = [&] { return evals >= options.max_evals; };

  // Singleton scores double as the candidate-restriction ranking.
  std::vector<std::pair<double, std::size_t>> singleton_scores;
  singleton_scores.reserve(candidates.size());
  for (std::size_t j : candidates) {
    if (out_of_budget()) {
      result.evaluations = evals;
      return result;
    }
    std::size_t single[1] = {j};
    double s = replacer.score_with(single);
    ++evals;
    result.best_score_reached = std::min(result.best_score_reached, s);
    singleton_scores.emplace_back(s, j);
  }
  if (options.max_candidates > 0 && candidates.size() > options.max_candidates) {
    auto by_score = singleton_scores;
    std::stable_sort(by_score.begin(), by_score.end());
    by_score.resize(options.max_candidates);
    std::set<std::size_t> keep;
    for (const auto& [s, j] : by_score) keep.insert(j);
    candidates.assign(keep.begin(), keep.end());
    std::vector<std::pair<double, std::size_t>> kept;
    for (const auto& [s, j] : singleton_scores) {
      if (keep.count(j)) kept.emplace_back(s, j);
    }
    singleton_scores = std::move(kept);
  }

  std::vector<std::size_t> flipped;  // insertion-ordered explanation set
  double flipped_score = 0.0;
  bool found = false;

  std::set<SearchNode, NodeOrder> open;
  std::set<std::vector<std::size_t>> visited;
  for (const auto& [s, j] : singleton_scores) {
    if (s <= threshold) {
      flipped = {j};
      flipped_score = s;
      found = true;
      break;
    }
    SearchNode node{s, {j}, {j}};
    visited.insert(node.sorted);
    open.insert(std::move(node));
  }

  while (!found && !open.empty()) {
    SearchNode node = *open.begin();
    open.erase(open.begin());
    if (node.insertion.size() >= options.max_size) continue;
    for (std::size_t j : candidates) {
      if (std::binary_search(node.sorted.begin(), node.sorted.end(), j)) continue;
      std::vector<std::size_t> child_sorted = node.sorted;
      child_sorted.insert(std::upper_bound(child_sorted.begin(), child_sorted.end(), j), j);
      if (visited.count(child_sorted)) continue;
      if (out_of_budget()) {
        result.evaluations = evals;
        return result;
      }
      double s = replacer.score_with(child_sorted);
      ++evals;
      result.best_score_reached = std::min(result.best_score_reached, s);
      if (s <= threshold) {
        flipped = node.insertion;
        flipped.push_back(j);
        flipped_score = s;
        found = true;
        break;
      }
      visited.insert(child_sorted);
      if (child_sorted.size() < options.max_size) {
        SearchNode child{s, node.insertion, std::move(child_sorted)};
        child.insertion.push_back(j);
        open.insert(std::move(child));
      }
    }
  }

  result.evaluations = evals;
  if (!found) return result;

  // Prune to irreducibility: repeated insertion-order scans, dropping any
  // member whose removal keeps the flip, until a full scan drops nothing.
  bool changed = true;
  while (changed && flipped.size() > 1) {
    changed = false;
    for (std::size_t i = 0; i < flipped.size() && flipped.size() > 1;) {
      std::vector<std::size_t> trial;
      trial.reserve(flipped.size() - 1);
      for (std::size_t k = 0; k < flipped.size(); ++k) {
        if (k != i) trial.push_back(flipped[k]);
      }
      double s = replacer.score_with(trial);
      ++evals;
      if (s <= threshold) {
        flipped = std::move(trial);
        flipped_score = s;
        changed = true;
      } else {
        ++i;
      }
    }
  }

  CounterfactualExplanation expl;
  expl.person_id = person_id;
  expl.features = flipped;
  for (std::size_t j : flipped) {
    expl.original_values.push_back(x[j]);
    expl.reference_values.push_back(refs.values[j]);
  }
  expl.original_score = original_score;
  expl.cf_score = flipped_score;
  expl.evaluations = evals;
  result.evaluations = evals;
  result.best_score_reached = std::min(result.best_score_reached, flipped_score);
  result.explanation = std::move(expl);
  return result;
}

nlohmann::ordered_json CounterfactualExplanation::to_json(const FeatureRegistry& registry) const {
  nlohmann::ordered_json features_json = nlohmann::ordered_json::array();
  for (std::size_t k = 0; k < features.size(); ++k) {
    features_json.push_back(
        {{"name", registry.name(features[k])},
         {"original", original_values[k]},
         {"reference", reference_values[k]},
         {"direction", reference_values[k] < original_values[k] ? "lower" : "higher"}});
  }
  return nlohmann::ordered_json{{"person_id", person_id},
                                {"features", features_json},
                                {"score", original_score},
                                {"cf_score", cf_score},
                                {"evaluations", evaluations}};
}

namespace {

std::string join_names(const std::vector<std::string>& names) {
  std::string out;
  for (std::size_t i = 0; i < names.size(); ++i) {
    if (i > 0) out += i + 1 == names.size() ? " and " : ", ";
    out += names[i];
  }
  return out;
}

std::string overall_phrase(const std::string& feature, bool lower) {
  if (feature == "n_tot") return lower ? "made fewer transactions overall" : "made more transactions overall";
  if (feature == "a_tot") return lower ? "spent less money overall" : "spent more money overall";
  if (feature == "a_avg") {
    return std::string("your average transaction amount was ") + (lower ? "lower" : "higher");
  }
  if (feature == "a_cv") {
    return std::string("the variability of your spending amount was ") + (lower ? "lower" : "higher");
  }
  if (feature == "a_avg_daily") {
    return std::string("your average daily spending was ") + (lower ? "lower" : "higher");
  }
  if (feature == "a_cv_daily") {
    return std::string("the variability of your daily spending was ") + (lower ? "lower" : "higher");
  }
  if (feature == "C_tot") return lower ? "spent in fewer distinct categories" : "spent in more distinct categories";
  if (feature == "C_entropy") {
    return std::string("spread your spending ") + (lower ? "less" : "more") +
           " evenly across categories";
  }
  return "your " + feature + " was " + (lower ? "lower" : "higher");
}

std::string strip_amount_suffix(const std::string& name) {
  const std::string suffix = " ($)";
  if (name.size() > suffix.size() && name.compare(name.size() - suffix.size(), suffix.size(), suffix) == 0) {
    return name.substr(0, name.size() - suffix.size());
  }
  return name;
}

}  // namespace

std::string render_counterfactual(const CounterfactualExplanation& expl,
                                  const FeatureRegistry& registry,
                                  const std::string& positive_label) {
  std::vector<std::string> less_freq, more_freq, less_money, more_money, other;
  for (std::size_t k = 0; k < expl.features.size(); ++k) {
    std::size_t f = expl.features[k];
    bool lower = expl.reference_values[k] < expl.original_values[k];
    switch (registry.kind(f)) {
      case FeatureKind::CountShare:
        (lower ? less_freq : more_freq).push_back(registry.name(f));
        break;
      case FeatureKind::AmountShare:
        (lower ? less_money : more_money).push_back(strip_amount_suffix(registry.name(f)));
        break;
      default:
        other.push_back(overall_phrase(registry.name(f), lower));
        break;
    }
  }
  std::vector<std::string> clauses;
  if (!less_freq.empty()) clauses.push_back("spent less frequently in " + join_names(less_freq));
  if (!more_freq.empty()) clauses.push_back("spent more frequently in " + join_names(more_freq));
  if (!less_money.empty()) clauses.push_back("spent less money on " + join_names(less_money));
  if (!more_money.empty()) clauses.push_back("spent more money on " + join_names(more_money));
  clauses.insert(clauses.end(), other.begin(), other.end());

  std::string out = "If you had ";
  for (std::size_t i = 0; i < clauses.size(); ++i) {
    if (i > 0) out += i + 1 == clauses.size() ? ", and " : ", ";
    out += clauses[i];
  }
  out += " -> then you would not have been predicted as " + positive_label;
  return out;
}

SimilaritySummary pairwise_similarity(const std::vector<CounterfactualExplanation>& expls,
                                      std::size_t pair_cap, std::uint64_t seed) {
  if (expls.size() < 2) {
    throw std::invalid_argument("pairwise_similarity: need at least 2 explanations");
  }
  std::vector<std::vector<std::size_t>> sets;
  sets.reserve(expls.size());
  for (const auto& e : expls) {
    auto s = e.features;
    std::sort(s.begin(), s.end());
    sets.push_back(std::move(s));
  }
  auto jaccard = [&](std::size_t a, std::size_t b) {
    std::size_t inter = 0;
    std::size_t i = 0, j = 0;
    while (i < sets[a].size() && j < sets[b].size()) {
      if (sets[a][i] == sets[b][j]) { ++inter; ++i; ++j; }
      else if (sets[a][i] < sets[b][j]) ++i;
      else ++j;
    }
    std::size_t uni = sets[a].size() + sets[b].size() - inter;
    return uni == 0 ? 0.0 : static_cast<double>(inter) / static_cast<double>(uni);
  };

  SimilaritySummary summary;
  summary.histogram.assign(10, 0);
  auto record = [&](double v) {
    summary.mean += v;
    auto bin = std::min<std::size_t>(9, static_cast<std::size_t>(v * 10.0));
    summary.histogram[bin] += 1;
    summary.pairs += 1;
  };

  const std::size_t n = expls.size();
  const std::size_t total_pairs = n * (n - 1) / 2;
  if (total_pairs <= pair_cap) {
    for (std::size_t a = 0; a < n; ++a) {
      for (std::size_t b = a + 1; b < n; ++b) record(jaccard(a, b));
    }
  } else {
    summary.sampled = true;
    Rng rng = Rng(seed).derive("pairwise_similarity");
    for (std::size_t k = 0; k < pair_cap; ++k) {
      auto a = static_cast<std::size_t>(rng.below(n));
      auto b = static_cast<std::size_t>(rng.below(n - 1));
      if (b >= a) ++b;
      record(jaccard(a, b));
    }
  }
  summary.mean /= static_cast<double>(summary.pairs);
  return summary;
}

nlohmann::ordered_json SimilaritySummary::to_json() const {
  return nlohmann::ordered_json{
      {"mean", mean}, {"histogram", histogram}, {"pairs", pairs}, {"sampled", sampled}};
}

ExplanationAnalytics explanation_analytics(const std::vector<CounterfactualExplanation>& expls,
                                           std::span<const int> true_labels,
                                           std::size_t n_features) {
  if (true_labels.size() != expls.size()) {
    throw std::invalid_argument("explanation_analytics: labels/explanations size mismatch");
  }
  ExplanationAnalytics out;
  if (expls.size() < 2) {
    out.degenerate = true;
    return out;
  }

  std::vector<double> sizes, scores;
  sizes.reserve(expls.size());
  scores.reserve(expls.size());
  std::map<std::vector<std::size_t>, std::size_t> occurrences;
  for (const auto& e : expls) {
    sizes.push_back(static_cast<double>(e.features.size()));
    scores.push_back(e.original_score);
    auto key = e.features;
    std::sort(key.begin(), key.end());
    occurrences[key] += 1;
  }

  double size_sum = 0.0;
  for (double s : sizes) size_sum += s;
  out.mean_size = size_sum / static_cast<double>(sizes.size());
  std::vector<double> sorted_sizes = sizes;
  std::sort(sorted_sizes.begin(), sorted_sizes.end());
  std::size_t n = sorted_sizes.size();
  out.median_size = n % 2 == 1 ? sorted_sizes[n / 2]
                               : 0.5 * (sorted_sizes[n / 2 - 1] + sorted_sizes[n / 2]);
  out.size_fraction = n_features > 0 ? out.mean_size / static_cast<double>(n_features) : 0.0;

  std::size_t unique = 0;
  for (const auto& e : expls) {
    auto key = e.features;
    std::sort(key.begin(), key.end());
    if (occurrences.at(key) == 1) ++unique;
  }
  out.uniqueness = static_cast<double>(unique) / static_cast<double>(expls.size());

  bool ok = false;
  out.score_size_pearson = pearson_correlation(scores, sizes, &ok);
  out.pearson_degenerate = !ok;

  double tp_sum = 0.0, fp_sum = 0.0;
  for (std::size_t i = 0; i < expls.size(); ++i) {
    if (true_labels[i] == 1) {
      tp_sum += sizes[i];
      ++out.tp_count;
    } else {
      fp_sum += sizes[i];
      ++out.fp_count;
    }
  }
  out.tp_mean_size = out.tp_count > 0 ? tp_sum / static_cast<double>(out.tp_count) : 0.0;
  out.fp_mean_size = out.fp_count > 0 ? fp_sum / static_cast<double>(out.fp_count) : 0.0;
  return out;
}

nlohmann::ordered_json ExplanationAnalytics::to_json() const {
  return nlohmann::ordered_json{{"mean_size", mean_size},
                                {"median_size", median_size},
                                {"size_fraction", size_fraction},
                                {"uniqueness", uniqueness},
                                {"score_size_pearson", score_size_pearson},
                                {"pearson_degenerate", pearson_degenerate},
                                {"tp_mean_size", tp_mean_size},
                                {"fp_mean_size", fp_mean_size},
                                {"tp_count", tp_count},
                                {"fp_count", fp_count},
                                {"degenerate", degenerate}};
}

}  // namespace spendtraits
