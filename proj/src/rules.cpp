#include "spendtraits/rules.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "spendtraits/rng.hpp"
#include "spendtraits/tree.hpp"

namespace spendtraits {

bool Rule::matches(std::span<const double> row) const {
  return std::all_of(conditions.begin(), conditions.end(),
                     [&](const RuleCondition& c) { return c.matches(row); });
}

bool RuleSet::predict(std::span<const double> row) const {
  return std::any_of(positive_rules.begin(), positive_rules.end(),
                     [&](const Rule& r) { return r.matches(row); });
}

std::vector<int> RuleSet::predict_rows(const Matrix& x) const {
  std::vector<int> out;
  out.reserve(x.rows);
  for (std::size_t r = 0; r < x.rows; ++r) out.push_back(predict(x.row(r)) ? 1 : 0);
  return out;
}

bool RuleSet::references_feature(std::size_t feature) const {
  for (const auto& rule : positive_rules) {
    for (const auto& c : rule.conditions) {
      if (c.feature == feature) return true;
    }
  }
  return false;
}

nlohmann::ordered_json RuleSet::to_json() const {
  nlohmann::ordered_json rules = nlohmann::ordered_json::array();
  for (const auto& rule : positive_rules) {
    nlohmann::ordered_json conditions = nlohmann::ordered_json::array();
    for (const auto& c : rule.conditions) {
      conditions.push_back({{"feature", c.feature},
                            {"op", c.op == RuleOp::LessEq ? "<=" : ">"},
                            {"threshold", c.threshold}});
    }
    rules.push_back({{"conditions", conditions}, {"class", positive_label}});
  }
  return nlohmann::ordered_json{
      {"rules", rules},
      {"default_class", default_label},
      {"single_class_warning", single_class_warning},
      {"provenance",
       {{"model_id", provenance.model_id},
        {"surrogate_depth", provenance.surrogate_depth},
        {"train_split_id", provenance.train_split_id}}}};
}

RuleSet RuleSet::from_json(const nlohmann::json& j) {
  RuleSet set;
  set.default_label = j.at("default_class").get<std::string>();
  set.single_class_warning = j.value("single_class_warning", false);
  const auto& prov = j.at("provenance");
  set.provenance.model_id = prov.at("model_id").get<std::string>();
  set.provenance.surrogate_depth = prov.at("surrogate_depth").get<int>();
  set.provenance.train_split_id = prov.at("train_split_id").get<std::string>();
  for (const auto& r : j.at("rules")) {
    Rule rule;
    for (const auto& c : r.at("conditions")) {
      RuleCondition cond;
      cond.feature = c.at("feature").get<std::size_t>();
      std::string op = c.at("op").get<std::string>();
      if (op == "<=") cond.op = RuleOp::LessEq;
      else if (op == ">") cond.op = RuleOp::Greater;
      else throw std::runtime_error("rule set: unknown operator '" + op + "'");
      cond.threshold = c.at("threshold").get<double>();
      rule.conditions.push_back(cond);
    }
    set.positive_rules.push_back(std::move(rule));
    set.positive_label = r.at("class").get<std::string>();
  }
  return set;
}

namespace {

void collect_rules(const std::vector<TreeNode>& nodes, std::size_t node_id,
                   std::vector<RuleCondition>& path, std::vector<Rule>& out) {
  const TreeNode& node = nodes[node_id];
  if (node.is_leaf()) {
    // Majority of the model-predicted labels; ties fall to the default class.
    if (node.counts[1] > node.counts[0]) out.push_back(Rule{path});
    return;
  }
  path.push_back({static_cast<std::size_t>(node.feature), RuleOp::LessEq, node.threshold});
  collect_rules(nodes, static_cast<std::size_t>(node.left), path, out);
  path.back().op = RuleOp::Greater;
  collect_rules(nodes, static_cast<std::size_t>(node.right), path, out);
  path.pop_back();
}

struct AgreementCounts {
  std::size_t tp = 0, fp = 0, fn = 0, tn = 0;

  std::size_t n() const { return tp + fp + fn + tn; }
  double fidelity() const { return static_cast<double>(tp + tn) / static_cast<double>(n()); }
  double precision() const {
    return tp + fp == 0 ? 0.0 : static_cast<double>(tp) / static_cast<double>(tp + fp);
  }
  double recall() const {
    return tp + fn == 0 ? 0.0 : static_cast<double>(tp) / static_cast<double>(tp + fn);
  }
  double fscore() const {
    double p = precision(), r = recall();
    return p + r == 0.0 ? 0.0 : 2.0 * p * r / (p + r);
  }
};

}  // namespace

RuleSet extract_rules(const Classifier& model, const Matrix& x_train, int max_depth,
                      int min_leaf) {
  if (x_train.rows == 0) throw std::invalid_argument("extract_rules: empty training split");
  if (max_depth < 1) throw std::invalid_argument("extract_rules: max_depth must be >= 1");

  std::vector<int> predicted;
  predicted.reserve(x_train.rows);
  for (std::size_t r = 0; r < x_train.rows; ++r) {
    predicted.push_back(model.predict(x_train.row(r)) ? 1 : 0);
  }

  RuleSet set;
  set.provenance.surrogate_depth = max_depth;
  bool any_pos = std::any_of(predicted.begin(), predicted.end(), [](int v) { return v == 1; });
  bool any_neg = std::any_of(predicted.begin(), predicted.end(), [](int v) { return v == 0; });
  if (!any_pos || !any_neg) {
    set.single_class_warning = true;
    return set;
  }

  TreeParams params;
  params.max_depth = max_depth;
  params.min_leaf = min_leaf;
  DecisionTree surrogate = DecisionTree::fit(x_train, predicted, params);
  std::vector<RuleCondition> path;
  collect_rules(surrogate.nodes(), 0, path, set.positive_rules);
  return set;
}

FidelityReport evaluate_fidelity(const RuleSet& rules, const Classifier& model,
                                 const Matrix& x_test) {
  if (x_test.rows == 0) throw std::invalid_argument("evaluate_fidelity: empty evaluation split");
  AgreementCounts counts;
  for (std::size_t r = 0; r < x_test.rows; ++r) {
    bool y_model = model.predict(x_test.row(r));
    bool y_rules = rules.predict(x_test.row(r));
    if (y_model && y_rules) ++counts.tp;
    else if (!y_model && y_rules) ++counts.fp;
    else if (y_model && !y_rules) ++counts.fn;
    else ++counts.tn;
  }
  FidelityReport report;
  report.n = counts.n();
  report.model_positives = counts.tp + counts.fn;
  report.rule_positives = counts.tp + counts.fp;
  report.fidelity = counts.fidelity();
  report.degenerate = report.model_positives == 0;
  report.precision_f = counts.precision();
  report.recall_f = counts.recall();
  report.fscore_f = counts.fscore();
  return report;
}

nlohmann::ordered_json FidelityReport::to_json() const {
  return nlohmann::ordered_json{{"fidelity", fidelity},       {"fscore_f", fscore_f},
                                {"precision_f", precision_f}, {"recall_f", recall_f},
                                {"degenerate", degenerate},   {"model_positives", model_positives},
                                {"rule_positives", rule_positives}, {"n", n}};
}

BaselineReport random_baseline(const Classifier& model, const Matrix& x_test, double rate,
                               int repetitions, std::uint64_t seed) {
  if (x_test.rows == 0) throw std::invalid_argument("random_baseline: empty evaluation split");
  if (repetitions < 1) throw std::invalid_argument("random_baseline: repetitions must be >= 1");

  std::vector<int> y_model;
  y_model.reserve(x_test.rows);
  for (std::size_t r = 0; r < x_test.rows; ++r) {
    y_model.push_back(model.predict(x_test.row(r)) ? 1 : 0);
  }

  Rng rng = Rng(seed).derive("random_baseline");
  double fidelity_sum = 0.0, recall_sum = 0.0;
  double precision_sum = 0.0, fscore_sum = 0.0;
  int defined_precision = 0;
  for (int rep = 0; rep < repetitions; ++rep) {
    AgreementCounts counts;
    for (int truth : y_model) {
      bool guess = rng.next_double() < rate;
      if (truth == 1 && guess) ++counts.tp;
      else if (truth == 0 && guess) ++counts.fp;
      else if (truth == 1) ++counts.fn;
      else ++counts.tn;
    }
    fidelity_sum += counts.fidelity();
    recall_sum += counts.recall();
    if (counts.tp + counts.fp > 0) {
      precision_sum += counts.precision();
      fscore_sum += counts.fscore();
      ++defined_precision;
    }
  }
  BaselineReport report;
  report.rate = rate;
  report.repetitions = repetitions;
  report.fidelity = fidelity_sum / repetitions;
  report.recall_f = recall_sum / repetitions;
  report.precision_f = defined_precision > 0 ? precision_sum / defined_precision : 0.0;
  report.fscore_f = defined_precision > 0 ? fscore_sum / defined_precision : 0.0;
  return report;
}

nlohmann::ordered_json BaselineReport::to_json() const {
  return nlohmann::ordered_json{{"fidelity", fidelity},       {"fscore_f", fscore_f},
                                {"precision_f", precision_f}, {"recall_f", recall_f},
                                {"rate", rate},               {"repetitions", repetitions}};
}

std::string render_rules(const RuleSet& rules, const FeatureRegistry& registry, int sig_digits) {
  std::string out;
  char buf[64];
  for (const auto& rule : rules.positive_rules) {
    out += "if ";
    for (std::size_t i = 0; i < rule.conditions.size(); ++i) {
      const auto& c = rule.conditions[i];
      if (i > 0) out += " and ";
      std::snprintf(buf, sizeof(buf), "%.*g", sig_digits, c.threshold);
      out += "(" + registry.name(c.feature) + (c.op == RuleOp::LessEq ? " <= " : " > ") + buf + ")";
    }
    out += " -> predicts " + rules.positive_label + "\n";
  }
  out += "else: predicts " + rules.default_label + "\n";
  return out;
}

}  // namespace spendtraits
