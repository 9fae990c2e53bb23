#include "spendtraits/synth.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <iterator>
#include <set>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "spendtraits/csv.hpp"
#include "spendtraits/features.hpp"
#include "spendtraits/rng.hpp"

namespace spendtraits {

namespace {

constexpr int kMaxAttemptsPerPerson = 12;
constexpr double kLowFraction = 0.25;
constexpr double kTargetHighFraction = 0.30;

const char* const kCategoryNames[] = {
    "Fast Food", "Supermarkets & Groceries", "Restaurants", "Coffee Shops",
    "Clothing & Accessories", "Beauty Products", "Department Stores", "Discount Stores",
    "Gas Stations", "Taxi", "Public Transportation", "Hotels & Motels",
    "Airlines", "Digital Purchase", "Subscription", "Mobile Payment",
    "Money Transfer", "ATM", "Insurance", "Loans & Mortgages",
    "Pets", "Veterinarians", "Pharmacies", "Gyms & Fitness",
    "Sporting Goods", "Books & Stationery", "Computers & Electronics", "Home Improvement",
    "Furniture", "Arts & Entertainment", "Movies & Music", "Tobacco",
    "Alcohol & Bars", "Utilities", "Internet & Cable", "Phone",
    "Education", "Childcare", "Medical Care", "Charity",
    "Gifts", "Toys & Games", "Shops", "Food & Beverage",
    "Check", "Vintage & Thrift"};

struct ResolvedCondition {
  std::size_t category = 0;
  bool amount = false;
  RuleOp op = RuleOp::Greater;
  double threshold = 0.0;
};

double round_cents(double v) { return std::max(0.01, std::round(v * 100.0) / 100.0); }

// Share the generator aims at so that sampling noise cannot cross the
// threshold: 30% relative plus an absolute floor of 0.05.
double directed_share(RuleOp op, double threshold) {
  double margin = std::max(0.3 * threshold, 0.05);
  if (op == RuleOp::Greater) return std::min(0.9, threshold + margin);
  return std::max(threshold - margin, 0.3 * threshold);
}

RuleOp negated(RuleOp op) { return op == RuleOp::Greater ? RuleOp::LessEq : RuleOp::Greater; }

bool condition_holds(const ResolvedCondition& c, double share) {
  return c.op == RuleOp::Greater ? share > c.threshold : share <= c.threshold;
}

std::vector<ResolvedCondition> resolve_conditions(const SynthSpec& spec,
                                                  const CategoryVocabulary& vocab) {
  std::vector<ResolvedCondition> resolved;
  std::set<std::string> seen;
  for (const auto& cond : spec.conditions) {
    if (!seen.insert(cond.feature).second) {
      throw std::invalid_argument("synth spec: multiple conditions on feature '" + cond.feature +
                                  "' are not supported");
    }
    ResolvedCondition r;
    r.op = cond.op;
    r.threshold = cond.threshold;
    std::string name = cond.feature;
    const std::string suffix = " ($)";
    if (name.size() > suffix.size() &&
        name.compare(name.size() - suffix.size(), suffix.size(), suffix) == 0) {
      r.amount = true;
      name = name.substr(0, name.size() - suffix.size());
    }
    auto idx = vocab.find(name);
    if (!idx) {
      throw std::invalid_argument("synth spec: condition references unknown category '" + name +
                                  "' (vocabulary has " + std::to_string(vocab.size()) +
                                  " categories)");
    }
    r.category = *idx;
    if (r.threshold < 0.0 || r.threshold >= 0.85) {
      throw std::invalid_argument("synth spec: threshold for '" + cond.feature +
                                  "' must lie in [0, 0.85)");
    }
    resolved.push_back(r);
  }
  return resolved;
}

std::string person_name(std::size_t index) {
  char buf[16];
  std::snprintf(buf, sizeof(buf), "P%05zu", index);
  return buf;
}

}  // namespace

CategoryVocabulary synth_vocabulary(std::size_t category_count) {
  CategoryVocabulary vocab;
  const std::size_t builtin = std::size(kCategoryNames);
  for (std::size_t c = 0; c < category_count; ++c) {
    if (c < builtin) {
      vocab.add_or_get(kCategoryNames[c]);
    } else {
      char buf[24];
      std::snprintf(buf, sizeof(buf), "Category %03zu", c + 1);
      vocab.add_or_get(buf);
    }
  }
  return vocab;
}

ScaleConfig default_scale_config() {
  struct TraitSpec {
    const char* name;
    const char* facets[3];
  };
  static const TraitSpec traits[] = {
      {"Extraversion", {"Sociability", "Assertiveness", "Energy"}},
      {"Agreeableness", {"Compassion", "Respectfulness", "Trust"}},
      {"Conscientiousness", {"Organization", "Productivity", "Responsibility"}},
      {"Neuroticism", {"Anxiety", "Depression", "Emotional Volatility"}},
      {"Openness", {"Intellectual Curiosity", "Aesthetic Sensitivity", "Creative Imagination"}},
  };
  // Items 3 and 5 of each six-item block are reverse-keyed.
  static const bool reversed_in_block[6] = {false, false, true, false, true, false};

  ScaleConfig config;
  for (std::size_t t = 0; t < std::size(traits); ++t) {
    ScaleDefinition trait;
    trait.name = traits[t].name;
    for (int i = 0; i < 6; ++i) {
      trait.items.push_back(static_cast<int>(6 * t) + i);
      trait.reversed.push_back(reversed_in_block[i]);
    }
    config.scales.push_back(trait);
    for (int f = 0; f < 3; ++f) {
      ScaleDefinition facet;
      facet.name = traits[t].facets[f];
      facet.parent = traits[t].name;
      for (int i = 0; i < 2; ++i) {
        int within = 2 * f + i;
        facet.items.push_back(static_cast<int>(6 * t) + within);
        facet.reversed.push_back(reversed_in_block[within]);
      }
      config.scales.push_back(facet);
    }
  }
  config.validate();
  return config;
}

double SynthSpec::resolved_satisfy_fraction() const {
  if (satisfy_fraction > 0.0) return satisfy_fraction;
  double sf = (kTargetHighFraction - noise_rate) / (signal_strength - noise_rate);
  return std::clamp(sf, 0.05, 0.95);
}

void SynthSpec::validate() const {
  if (signal_strength <= noise_rate) {
    throw std::invalid_argument("synth spec: signal strength must exceed the noise rate");
  }
  if (signal_strength < 0.0 || signal_strength > 1.0 || noise_rate < 0.0 || noise_rate > 1.0) {
    throw std::invalid_argument("synth spec: signal/noise must lie in [0, 1]");
  }
  if (population < 10) throw std::invalid_argument("synth spec: population must be >= 10");
  if (category_count < 6) {
    throw std::invalid_argument("synth spec: need at least 6 categories to pass the filter");
  }
  if (!window.aligned_to_months()) {
    throw std::invalid_argument("synth spec: window must span whole calendar months");
  }
  if (monthly_tx_mean < 5.0) {
    throw std::invalid_argument("synth spec: monthly_tx_mean must be >= 5");
  }
  if (satisfy_fraction < 0.0 || satisfy_fraction >= 1.0) {
    throw std::invalid_argument("synth spec: satisfy_fraction must lie in [0, 1)");
  }

  CategoryVocabulary vocab = synth_vocabulary(category_count);
  auto resolved = resolve_conditions(*this, vocab);
  double directed_mass = 0.0;
  for (const auto& c : resolved) {
    // Worst case: satisfier targets for count conditions, plus the count
    // floor reserved for amount conditions that need transactions.
    directed_mass += c.amount ? std::max(0.05, 0.0) : directed_share(c.op, c.threshold);
  }
  if (directed_mass > 0.8) {
    throw std::invalid_argument("synth spec: planted count-share targets sum to " +
                                std::to_string(directed_mass) + ", which leaves no room");
  }

  // The High rate must stay below the tertile cut so that the mid tie-block
  // absorbs both percentile thresholds.
  double sf = resolved_satisfy_fraction();
  double n = static_cast<double>(population);
  double n_sat = std::round(sf * n);
  double n_high = std::round(signal_strength * n_sat) + std::round(noise_rate * (n - n_sat));
  if (n_high / n > 0.32) {
    throw std::invalid_argument(
        "synth spec: implied High rate " + std::to_string(n_high / n) +
        " exceeds 0.32; lower satisfy_fraction, signal strength or noise rate");
  }
}

nlohmann::ordered_json SynthSpec::to_json() const {
  nlohmann::ordered_json conds = nlohmann::ordered_json::array();
  for (const auto& c : conditions) {
    conds.push_back({{"feature", c.feature},
                     {"op", c.op == RuleOp::Greater ? ">" : "<="},
                     {"threshold", c.threshold}});
  }
  return nlohmann::ordered_json{{"conditions", conds},
                                {"signal_strength", signal_strength},
                                {"noise_rate", noise_rate},
                                {"population", population},
                                {"category_count", category_count},
                                {"seed", seed},
                                {"window_start", format_date(window.start)},
                                {"window_end", format_date(window.end)},
                                {"satisfy_fraction", satisfy_fraction},
                                {"monthly_tx_mean", monthly_tx_mean},
                                {"amount_log_mean", amount_log_mean},
                                {"amount_log_sigma", amount_log_sigma},
                                {"target_trait", target_trait}};
}

SynthSpec SynthSpec::from_json(const nlohmann::json& j) {
  SynthSpec spec;
  for (const auto& c : j.value("conditions", nlohmann::json::array())) {
    PlantedCondition cond;
    cond.feature = c.at("feature").get<std::string>();
    std::string op = c.at("op").get<std::string>();
    if (op == ">") cond.op = RuleOp::Greater;
    else if (op == "<=") cond.op = RuleOp::LessEq;
    else throw std::runtime_error("synth spec: unknown operator '" + op + "'");
    cond.threshold = c.at("threshold").get<double>();
    spec.conditions.push_back(std::move(cond));
  }
  spec.signal_strength = j.value("signal_strength", spec.signal_strength);
  spec.noise_rate = j.value("noise_rate", spec.noise_rate);
  spec.population = j.value("population", spec.population);
  spec.category_count = j.value("category_count", spec.category_count);
  spec.seed = j.value("seed", spec.seed);
  if (j.contains("window_start")) spec.window.start = parse_date(j.at("window_start").get<std::string>());
  if (j.contains("window_end")) spec.window.end = parse_date(j.at("window_end").get<std::string>());
  spec.satisfy_fraction = j.value("satisfy_fraction", spec.satisfy_fraction);
  spec.monthly_tx_mean = j.value("monthly_tx_mean", spec.monthly_tx_mean);
  spec.amount_log_mean = j.value("amount_log_mean", spec.amount_log_mean);
  spec.amount_log_sigma = j.value("amount_log_sigma", spec.amount_log_sigma);
  spec.target_trait = j.value("target_trait", spec.target_trait);
  return spec;
}

namespace {

// One attempt at a transaction stream honoring the directed conditions.
// Returns an empty optional when sampling noise broke a constraint.
std::optional<PersonLedger> try_stream(const SynthSpec& spec, const CategoryVocabulary& vocab,
                                       const std::vector<ResolvedCondition>& conditions,
                                       bool satisfier, std::size_t violate_index,
                                       const std::string& person_id, Rng rng) {
  const std::size_t k = vocab.size();
  const int n_months = spec.window.num_months();

  std::vector<int> month_counts(static_cast<std::size_t>(n_months));
  for (auto& c : month_counts) {
    c = kMinMonthlyTransactions + rng.poisson(std::max(0.0, spec.monthly_tx_mean - 5.0));
  }

  // Count-share targets implied by the directed conditions.
  std::vector<double> target(k, -1.0);
  for (std::size_t i = 0; i < conditions.size(); ++i) {
    const auto& c = conditions[i];
    bool satisfy_this = satisfier || i != violate_index;
    RuleOp effective = satisfy_this ? c.op : negated(c.op);
    if (c.amount) {
      // Amount conditions that demand presence need transactions to scale.
      if (effective == RuleOp::Greater && target[c.category] < 0.0) target[c.category] = 0.05;
      continue;
    }
    target[c.category] = directed_share(effective, c.threshold);
  }

  double fixed_mass = 0.0;
  for (double t : target) {
    if (t >= 0.0) fixed_mass += t;
  }
  if (fixed_mass > 0.9) throw std::invalid_argument("synth: directed share targets exceed 0.9");

  std::vector<double> share(k, 0.0);
  double base_sum = 0.0;
  std::vector<double> base(k, 0.0);
  for (std::size_t c = 0; c < k; ++c) {
    if (target[c] < 0.0) {
      base[c] = std::exp(0.9 * rng.normal());
      base_sum += base[c];
    }
  }
  for (std::size_t c = 0; c < k; ++c) {
    share[c] = target[c] >= 0.0 ? target[c] : (1.0 - fixed_mass) * base[c] / base_sum;
  }
  std::vector<double> cumulative(k, 0.0);
  double acc = 0.0;
  for (std::size_t c = 0; c < k; ++c) {
    acc += share[c];
    cumulative[c] = acc;
  }

  struct Draft {
    int month;
    std::uint32_t category;
    double amount;
  };
  std::vector<Draft> drafts;
  for (int m = 0; m < n_months; ++m) {
    for (int i = 0; i < month_counts[static_cast<std::size_t>(m)]; ++i) {
      double u = rng.next_double() * acc;
      auto it = std::lower_bound(cumulative.begin(), cumulative.end(), u);
      auto cat = static_cast<std::uint32_t>(std::min<std::size_t>(
          static_cast<std::size_t>(it - cumulative.begin()), k - 1));
      double amount = round_cents(rng.lognormal(spec.amount_log_mean, spec.amount_log_sigma));
      drafts.push_back({m, cat, amount});
    }
  }

  // Scale category amounts to meet directed amount-share conditions.
  for (std::size_t i = 0; i < conditions.size(); ++i) {
    const auto& c = conditions[i];
    if (!c.amount) continue;
    bool satisfy_this = satisfier || i != violate_index;
    RuleOp effective = satisfy_this ? c.op : negated(c.op);
    double want = directed_share(effective, c.threshold);
    double in_category = 0.0, total = 0.0;
    for (const auto& d : drafts) {
      total += d.amount;
      if (d.category == c.category) in_category += d.amount;
    }
    if (in_category <= 0.0) {
      if (effective == RuleOp::Greater) return std::nullopt;  // nothing to scale, re-draw
      continue;  // zero share already sits below the threshold
    }
    double rest = total - in_category;
    double scale = want * rest / ((1.0 - want) * in_category);
    for (auto& d : drafts) {
      if (d.category == c.category) d.amount = round_cents(d.amount * scale);
    }
  }

  // Top up months that fall short of the spend criterion.
  for (int m = 0; m < n_months; ++m) {
    double month_total = 0.0;
    for (const auto& d : drafts) {
      if (d.month == m) month_total += d.amount;
    }
    if (month_total < kMinMonthlySpend) {
      double scale = (kMinMonthlySpend + 2.0) / month_total;
      for (auto& d : drafts) {
        if (d.month == m) d.amount = round_cents(d.amount * scale);
      }
    }
  }

  PersonLedger ledger;
  ledger.person_id = person_id;
  ledger.window = spec.window;
  const int first_month = spec.window.first_month_index();
  for (const auto& d : drafts) {
    int month_index = first_month + d.month;
    Date day{month_index / 12, month_index % 12 + 1, 1};
    day.day = 1 + static_cast<int>(rng.below(
        static_cast<std::uint64_t>(days_in_month(day.year, day.month))));
    Timestamp ts{days_from_civil(day) * 86400 + static_cast<std::int64_t>(rng.below(86400))};
    ledger.records.push_back(TransactionRecord{ts, d.amount, d.category});
  }
  std::stable_sort(ledger.records.begin(), ledger.records.end(),
                   [](const TransactionRecord& a, const TransactionRecord& b) {
                     return a.timestamp < b.timestamp;
                   });

  // Verify with the pipeline's own feature definitions.
  auto category_features = compute_category_features(ledger, vocab);
  double c_tot = category_features[2 * k];
  if (c_tot < kMinDistinctCategories) return std::nullopt;
  for (std::size_t i = 0; i < conditions.size(); ++i) {
    const auto& c = conditions[i];
    double value = category_features[2 * c.category + (c.amount ? 1 : 0)];
    bool holds = condition_holds(c, value);
    bool want = satisfier || i != violate_index;
    if (holds != want) return std::nullopt;
  }
  std::vector<double> month_spend(static_cast<std::size_t>(n_months), 0.0);
  for (const auto& rec : ledger.records) {
    month_spend[static_cast<std::size_t>(rec.timestamp.month_index() - first_month)] += rec.amount;
  }
  for (double s : month_spend) {
    if (s < kMinMonthlySpend) return std::nullopt;
  }
  return ledger;
}

std::array<int, 6> items_for_total(int total, Rng& rng) {
  // Six integers in 1..5 with the given sum; the remainder lands on a
  // seeded choice of items so responses do not look banded.
  std::array<int, 6> items{};
  int base = total / 6;
  int rem = total % 6;
  std::vector<std::size_t> order = rng.permutation(6);
  for (std::size_t i = 0; i < 6; ++i) items[i] = base;
  for (int r = 0; r < rem; ++r) items[order[static_cast<std::size_t>(r)]] += 1;
  return items;
}

}  // namespace

SynthDataset generate_ledger_dataset(const SynthSpec& spec) {
  spec.validate();
  const std::size_t n = spec.population;
  Rng root(spec.seed);

  SynthDataset data;
  data.vocabulary = synth_vocabulary(spec.category_count);
  data.scales = default_scale_config();
  auto conditions = resolve_conditions(spec, data.vocabulary);
  const ScaleDefinition& target_scale = data.scales.find(spec.target_trait);
  if (target_scale.is_facet()) {
    throw std::invalid_argument("synth spec: target trait '" + spec.target_trait +
                                "' is a facet; plant the signal on a trait");
  }

  // Directed roles: satisfiers, intended Highs among them and the others,
  // intended Lows among the remaining non-Highs.
  double sf = spec.resolved_satisfy_fraction();
  auto n_sat = static_cast<std::size_t>(std::llround(sf * static_cast<double>(n)));
  n_sat = std::min(n_sat, n);
  std::vector<std::size_t> person_order = root.derive("satisfiers").permutation(n);
  data.rule_satisfied.assign(n, 0);
  for (std::size_t i = 0; i < n_sat; ++i) data.rule_satisfied[person_order[i]] = 1;

  std::vector<std::size_t> sats, others;
  for (std::size_t p = 0; p < n; ++p) {
    (data.rule_satisfied[p] ? sats : others).push_back(p);
  }
  Rng high_rng = root.derive("high_assignment");
  high_rng.shuffle(sats);
  high_rng.shuffle(others);
  auto n_high_sat = static_cast<std::size_t>(
      std::llround(spec.signal_strength * static_cast<double>(sats.size())));
  auto n_high_other = static_cast<std::size_t>(
      std::llround(spec.noise_rate * static_cast<double>(others.size())));
  data.intended_high.assign(n, 0);
  for (std::size_t i = 0; i < std::min(n_high_sat, sats.size()); ++i) {
    data.intended_high[sats[i]] = 1;
  }
  for (std::size_t i = 0; i < std::min(n_high_other, others.size()); ++i) {
    data.intended_high[others[i]] = 1;
  }

  std::vector<std::size_t> non_high;
  for (std::size_t p = 0; p < n; ++p) {
    if (!data.intended_high[p]) non_high.push_back(p);
  }
  Rng low_rng = root.derive("low_assignment");
  low_rng.shuffle(non_high);
  auto n_low = static_cast<std::size_t>(std::llround(kLowFraction * static_cast<double>(n)));
  data.intended_low.assign(n, 0);
  for (std::size_t i = 0; i < std::min(n_low, non_high.size()); ++i) {
    data.intended_low[non_high[i]] = 1;
  }

  // Streams.
  data.ledgers.reserve(n);
  for (std::size_t p = 0; p < n; ++p) {
    std::string id = person_name(p);
    bool satisfier = data.rule_satisfied[p] != 0;
    std::optional<PersonLedger> ledger;
    for (int attempt = 0; attempt < kMaxAttemptsPerPerson && !ledger; ++attempt) {
      std::size_t violate_index =
          conditions.empty() ? 0 : (p + static_cast<std::size_t>(attempt)) % conditions.size();
      Rng rng = root.derive("person", p).derive("attempt", static_cast<std::uint64_t>(attempt));
      ledger = try_stream(spec, data.vocabulary, conditions, satisfier, violate_index, id, rng);
    }
    if (!ledger) {
      throw std::runtime_error("synth: could not realize directed conditions for person " + id +
                               " after " + std::to_string(kMaxAttemptsPerPerson) +
                               " attempts; the spec is too tight");
    }
    data.ledgers.push_back(std::move(*ledger));
  }

  // Survey. The mid block sits exactly at score 3 so the tertile cuts land on
  // it, making the discretized High/Low labels equal the intended ones.
  for (std::size_t p = 0; p < n; ++p) {
    Rng rng = root.derive("survey", p);
    std::array<int, kSurveyItemCount> items{};
    for (const auto& scale : data.scales.scales) {
      if (scale.is_facet()) continue;
      if (scale.name == target_scale.name) continue;
      double latent = 1.0 + 4.0 * rng.next_double();
      for (std::size_t i = 0; i < scale.items.size(); ++i) {
        double noisy = latent + 0.6 * rng.normal();
        int v = std::clamp(static_cast<int>(std::lround(noisy)), 1, 5);
        items[static_cast<std::size_t>(scale.items[i])] = scale.reversed[i] ? 6 - v : v;
      }
    }
    int total = 18;  // middle: exactly 3.0
    if (data.intended_high[p]) total = 20 + static_cast<int>(rng.below(10));   // (3.33 .. 4.83)
    else if (data.intended_low[p]) total = 7 + static_cast<int>(rng.below(10));  // (1.17 .. 2.67)
    auto trait_items = items_for_total(total, rng);
    for (std::size_t i = 0; i < target_scale.items.size(); ++i) {
      int v = trait_items[i];
      items[static_cast<std::size_t>(target_scale.items[i])] = target_scale.reversed[i] ? 6 - v : v;
    }
    data.survey.person_ids.push_back(person_name(p));
    data.survey.items.push_back(items);
  }
  return data;
}

void generate_dataset(const SynthSpec& spec, const std::filesystem::path& out_dir) {
  SynthDataset data = generate_ledger_dataset(spec);
  std::filesystem::create_directories(out_dir);
  write_transactions_csv(out_dir / "transactions.csv", data.ledgers, data.vocabulary);
  write_survey_csv(out_dir / "survey.csv", data.survey);
  write_text_file(out_dir / "scales.json", data.scales.to_json().dump(2) + "\n");
  write_text_file(out_dir / "synth_spec.json", spec.to_json().dump(2) + "\n");
}

std::optional<std::vector<std::size_t>> brute_force_counterfactual(
    std::span<const double> x, const Classifier& model, const ReferenceValues& refs,
    std::size_t k_max, std::span<const std::size_t> candidates) {
  std::vector<std::size_t> cand;
  if (candidates.empty()) {
    for (std::size_t j = 0; j < x.size(); ++j) {
      if (x[j] != refs.values[j]) cand.push_back(j);
    }
  } else {
    cand.assign(candidates.begin(), candidates.end());
    std::sort(cand.begin(), cand.end());
  }
  if (cand.size() > 20 && k_max > 4) {
    throw std::invalid_argument("brute_force_counterfactual: " + std::to_string(cand.size()) +
                                " candidates with k_max " + std::to_string(k_max) +
                                " is intractable (need <= 20 candidates or k_max <= 4)");
  }

  std::vector<double> work(x.begin(), x.end());
  auto flips = [&](const std::vector<std::size_t>& subset) {
    for (std::size_t j : subset) work[j] = refs.values[j];
    double s = model.score(work);
    for (std::size_t j : subset) work[j] = x[j];
    return s <= model.threshold;
  };

  std::vector<std::size_t> subset;
  for (std::size_t size = 1; size <= std::min(k_max, cand.size()); ++size) {
    std::vector<std::size_t> pick(size);
    for (std::size_t i = 0; i < size; ++i) pick[i] = i;
    for (;;) {
      subset.clear();
      for (std::size_t i : pick) subset.push_back(cand[i]);
      if (flips(subset)) return subset;
      // next lexicographic combination
      std::size_t i = size;
      while (i > 0 && pick[i - 1] == cand.size() - size + i - 1) --i;
      if (i == 0) break;
      ++pick[i - 1];
      for (std::size_t j = i; j < size; ++j) pick[j] = pick[j - 1] + 1;
    }
  }
  return std::nullopt;
}

double brute_force_auc(std::span<const double> scores, std::span<const int> labels) {
  if (scores.size() != labels.size()) throw std::invalid_argument("brute_force_auc: size mismatch");
  double wins = 0.0;
  std::size_t pairs = 0;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    if (labels[i] != 1) continue;
    for (std::size_t j = 0; j < scores.size(); ++j) {
      if (labels[j] != 0) continue;
      ++pairs;
      if (scores[i] > scores[j]) wins += 1.0;
      else if (scores[i] == scores[j]) wins += 0.5;
    }
  }
  if (pairs == 0) throw std::invalid_argument("brute_force_auc: both classes must be present");
  return wins / static_cast<double>(pairs);
}

}  // namespace spendtraits
