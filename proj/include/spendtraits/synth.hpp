#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "spendtraits/counterfactual.hpp"
#include "spendtraits/dates.hpp"
#include "spendtraits/forest.hpp"
#include "spendtraits/ingest.hpp"
#include "spendtraits/rules.hpp"
#include "spendtraits/targets.hpp"

namespace spendtraits {

// A condition over generatable features: category count shares ("<name>")
// and amount shares ("<name> ($)").
struct PlantedCondition {
  std::string feature;
  RuleOp op = RuleOp::Greater;
  double threshold = 0.0;
};

// Recipe for a synthetic population with a planted personality signal:
// persons directed to satisfy the rule score High on the target trait with
// probability `signal_strength`, everyone else with probability `noise_rate`.
struct SynthSpec {
  std::vector<PlantedCondition> conditions;
  double signal_strength = 0.95;
  double noise_rate = 0.05;
  std::size_t population = 1000;
  std::size_t category_count = 12;
  std::uint64_t seed = 1;

  DateWindow window{Date{2019, 1, 1}, Date{2019, 12, 31}};
  // 0 derives the fraction that lands the High rate near the tertile cut.
  double satisfy_fraction = 0.0;
  double monthly_tx_mean = 25.0;
  double amount_log_mean = 3.4;  // log $30
  double amount_log_sigma = 0.8;
  std::string target_trait = "Neuroticism";

  void validate() const;
  double resolved_satisfy_fraction() const;

  nlohmann::ordered_json to_json() const;
  static SynthSpec from_json(const nlohmann::json& j);
};

// The five-trait, fifteen-facet scale layout the generator writes items for.
ScaleConfig default_scale_config();

// Deterministic category names for a given vocabulary size.
CategoryVocabulary synth_vocabulary(std::size_t category_count);

struct SynthDataset {
  std::vector<PersonLedger> ledgers;  // sorted by person_id
  CategoryVocabulary vocabulary;
  SurveyTable survey;  // same person order as the ledgers
  ScaleConfig scales;
  std::vector<std::uint8_t> rule_satisfied;
  std::vector<std::uint8_t> intended_high;
  std::vector<std::uint8_t> intended_low;
};

// In-memory generation. Every person passes the activity filter by
// construction, and the directed rule satisfaction is verified against the
// same feature definitions the pipeline uses (a few re-draws absorb sampling
// noise; an infeasible spec throws).
SynthDataset generate_ledger_dataset(const SynthSpec& spec);

// Writes transactions.csv, survey.csv, scales.json and synth_spec.json.
void generate_dataset(const SynthSpec& spec, const std::filesystem::path& out_dir);

// Exhaustive counterfactual search by increasing subset size; the oracle for
// the best-first search. `candidates` defaults to every feature differing
// from its reference. Tractability guard: |candidates| <= 20 or k_max <= 4.
std::optional<std::vector<std::size_t>> brute_force_counterfactual(
    std::span<const double> x, const Classifier& model, const ReferenceValues& refs,
    std::size_t k_max, std::span<const std::size_t> candidates = {});

// Direct pairwise AUC, ties counted 1/2.
double brute_force_auc(std::span<const double> scores, std::span<const int> labels);

}  // namespace spendtraits
