#include "spendtraits/targets.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <map>
#include <set>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "spendtraits/csv.hpp"

namespace spendtraits {

namespace {

double sample_variance(std::span<const double> values) {
  const std::size_t n = values.size();
  double mean = 0.0;
  for (double v : values) mean += v;
  mean /= static_cast<double>(n);
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  return ss / static_cast<double>(n - 1);
}

}  // namespace

void ScaleConfig::validate() const {
  std::set<std::string> names;
  std::map<std::string, const ScaleDefinition*> traits;
  for (const auto& def : scales) {
    if (!names.insert(def.name).second) {
      throw std::runtime_error("scale config: duplicate scale name '" + def.name + "'");
    }
    if (def.items.size() != def.reversed.size()) {
      throw std::runtime_error("scale '" + def.name + "': items/reversed size mismatch");
    }
    std::size_t expected = def.is_facet() ? 2 : 6;
    if (def.items.size() != expected) {
      throw std::runtime_error("scale '" + def.name + "': expected " + std::to_string(expected) +
                               " items, got " + std::to_string(def.items.size()));
    }
    std::set<int> unique;
    for (int item : def.items) {
      if (item < 0 || item >= kSurveyItemCount) {
        throw std::runtime_error("scale '" + def.name + "': item index " + std::to_string(item) +
                                 " outside 0.." + std::to_string(kSurveyItemCount - 1));
      }
      if (!unique.insert(item).second) {
        throw std::runtime_error("scale '" + def.name + "': duplicate item index");
      }
    }
    if (!def.is_facet()) traits[def.name] = &def;
  }
  // Facets of a trait must partition the trait's items.
  std::map<std::string, std::set<int>> facet_items;
  for (const auto& def : scales) {
    if (!def.is_facet()) continue;
    auto trait = traits.find(def.parent);
    if (trait == traits.end()) {
      throw std::runtime_error("facet '" + def.name + "': unknown parent trait '" + def.parent + "'");
    }
    for (int item : def.items) {
      if (!facet_items[def.parent].insert(item).second) {
        throw std::runtime_error("facet '" + def.name + "': item " + std::to_string(item) +
                                 " already covered by a sibling facet");
      }
      if (std::find(trait->second->items.begin(), trait->second->items.end(), item) ==
          trait->second->items.end()) {
        throw std::runtime_error("facet '" + def.name + "': item " + std::to_string(item) +
                                 " not part of trait '" + def.parent + "'");
      }
    }
  }
  for (const auto& [trait, covered] : facet_items) {
    if (covered.size() != traits.at(trait)->items.size()) {
      throw std::runtime_error("trait '" + trait + "': facets do not cover all items");
    }
  }
}

const ScaleDefinition& ScaleConfig::find(const std::string& name) const {
  for (const auto& def : scales) {
    if (def.name == name) return def;
  }
  throw std::runtime_error("scale config: no scale named '" + name + "'");
}

nlohmann::ordered_json ScaleConfig::to_json() const {
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (const auto& def : scales) {
    nlohmann::ordered_json j{{"name", def.name}, {"items", def.items}};
    std::vector<int> rev;
    for (bool b : def.reversed) rev.push_back(b ? 1 : 0);
    j["reversed"] = rev;
    if (def.is_facet()) j["parent"] = def.parent;
    arr.push_back(std::move(j));
  }
  return nlohmann::ordered_json{{"scales", arr}};
}

ScaleConfig ScaleConfig::from_json(const nlohmann::json& j) {
  ScaleConfig config;
  for (const auto& s : j.at("scales")) {
    ScaleDefinition def;
    def.name = s.at("name").get<std::string>();
    def.parent = s.value("parent", "");
    def.items = s.at("items").get<std::vector<int>>();
    for (const auto& r : s.at("reversed")) def.reversed.push_back(r.get<int>() != 0);
    config.scales.push_back(std::move(def));
  }
  config.validate();
  return config;
}

ScaleConfig ScaleConfig::load(const std::filesystem::path& path) {
  return from_json(nlohmann::json::parse(read_text_file(path)));
}

std::vector<double> score_scale(const SurveyTable& survey, const ScaleDefinition& def) {
  std::vector<double> scores;
  scores.reserve(survey.size());
  for (const auto& items : survey.items) {
    double sum = 0.0;
    for (std::size_t i = 0; i < def.items.size(); ++i) {
      int v = items[static_cast<std::size_t>(def.items[i])];
      sum += def.reversed[i] ? 6 - v : v;
    }
    scores.push_back(sum / static_cast<double>(def.items.size()));
  }
  return scores;
}

double cronbach_alpha(const SurveyTable& survey, const ScaleDefinition& def) {
  const std::size_t k = def.items.size();
  const std::size_t n = survey.size();
  if (k < 2) throw std::invalid_argument("cronbach_alpha: need at least 2 items");
  if (n < 2) throw std::invalid_argument("cronbach_alpha: need at least 2 persons");

  std::vector<double> totals(n, 0.0);
  double item_variance_sum = 0.0;
  std::vector<double> column(n);
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t p = 0; p < n; ++p) {
      int v = survey.items[p][static_cast<std::size_t>(def.items[i])];
      double scored = def.reversed[i] ? 6 - v : v;
      column[p] = scored;
      totals[p] += scored;
    }
    item_variance_sum += sample_variance(column);
  }
  double total_variance = sample_variance(totals);
  if (total_variance == 0.0) {
    throw std::runtime_error("cronbach_alpha: degenerate scale '" + def.name +
                             "' (zero variance of item sums)");
  }
  double kk = static_cast<double>(k);
  return kk / (kk - 1.0) * (1.0 - item_variance_sum / total_variance);
}

MinMaxParams fit_minmax(std::span<const double> values) {
  if (values.empty()) throw std::invalid_argument("minmax: empty input");
  auto [lo, hi] = std::minmax_element(values.begin(), values.end());
  if (*lo == *hi) throw std::runtime_error("minmax: constant scores cannot be normalized");
  return MinMaxParams{*lo, *hi};
}

std::vector<double> apply_minmax(std::span<const double> values, const MinMaxParams& params) {
  std::vector<double> out;
  out.reserve(values.size());
  const double range = params.max - params.min;
  for (double v : values) out.push_back((v - params.min) / range);
  return out;
}

double percentile(std::span<const double> values, double p) {
  if (values.empty()) throw std::invalid_argument("percentile: empty input");
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  if (sorted.size() == 1) return sorted[0];
  double rank = p / 100.0 * static_cast<double>(sorted.size() - 1);
  auto lower = static_cast<std::size_t>(std::floor(rank));
  auto upper = static_cast<std::size_t>(std::ceil(rank));
  double frac = rank - static_cast<double>(lower);
  return sorted[lower] + frac * (sorted[upper] - sorted[lower]);
}

DiscretizeResult discretize(std::span<const double> scores) {
  if (scores.size() < 3) throw std::invalid_argument("discretize: need at least 3 persons");
  DiscretizeResult result;
  result.p33 = percentile(scores, 33.0);
  result.p66 = percentile(scores, 66.0);
  result.high.reserve(scores.size());
  result.low.reserve(scores.size());
  for (double s : scores) {
    result.high.push_back(s > result.p66 ? 1 : 0);
    result.low.push_back(s < result.p33 ? 1 : 0);
  }
  return result;
}

const TraitTargets& TargetsTable::find(const std::string& trait) const {
  for (const auto& t : targets) {
    if (t.trait == trait) return t;
  }
  throw std::runtime_error("targets: no scale named '" + trait + "'");
}

TargetsTable build_targets(const SurveyTable& survey, const ScaleConfig& config) {
  config.validate();
  TargetsTable table;
  table.person_ids = survey.person_ids;
  for (const auto& def : config.scales) {
    TraitTargets t;
    t.trait = def.name;
    t.raw = score_scale(survey, def);
    t.normalized = apply_minmax(t.raw, fit_minmax(t.raw));
    auto disc = discretize(t.raw);
    t.high = std::move(disc.high);
    t.low = std::move(disc.low);
    table.targets.push_back(std::move(t));
    if (!def.is_facet()) {
      table.alphas.emplace_back(def.name, cronbach_alpha(survey, def));
    }
  }
  return table;
}

void write_targets_csv(const std::filesystem::path& path, const TargetsTable& table) {
  std::string out = "person_id,trait,raw,normalized,high,low\n";
  for (const auto& t : table.targets) {
    for (std::size_t p = 0; p < table.person_ids.size(); ++p) {
      out += csv_escape(table.person_ids[p]);
      out += ',';
      out += csv_escape(t.trait);
      out += ',';
      out += format_double(t.raw[p]);
      out += ',';
      out += format_double(t.normalized[p]);
      out += ',';
      out += t.high[p] ? '1' : '0';
      out += ',';
      out += t.low[p] ? '1' : '0';
      out += '\n';
    }
  }
  write_text_file(path, out);
}

TargetsTable read_targets_csv(const std::filesystem::path& path) {
  CsvTable csv = parse_csv_file(path);
  std::vector<std::string> expected{"person_id", "trait", "raw", "normalized", "high", "low"};
  if (csv.header != expected) {
    throw std::runtime_error("targets CSV: unexpected header in " + path.string());
  }
  TargetsTable table;
  std::map<std::string, std::size_t> trait_index;
  for (std::size_t r = 0; r < csv.records.size(); ++r) {
    const auto& row = csv.records[r];
    const std::string& trait = row[1];
    auto it = trait_index.find(trait);
    if (it == trait_index.end()) {
      it = trait_index.emplace(trait, table.targets.size()).first;
      table.targets.push_back(TraitTargets{trait, {}, {}, {}, {}});
    }
    TraitTargets& t = table.targets[it->second];
    if (it->second == 0) {
      table.person_ids.push_back(row[0]);
    } else if (t.raw.size() >= table.person_ids.size() ||
               table.person_ids[t.raw.size()] != row[0]) {
      throw std::runtime_error("targets CSV: row " + std::to_string(csv.record_numbers[r]) +
                               ": person order differs between trait blocks");
    }
    auto parse_d = [&](const std::string& cell) {
      double v = 0.0;
      auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
      if (ec != std::errc{} || ptr != cell.data() + cell.size()) {
        throw std::runtime_error("targets CSV: row " + std::to_string(csv.record_numbers[r]) +
                                 ": bad value '" + cell + "'");
      }
      return v;
    };
    t.raw.push_back(parse_d(row[2]));
    t.normalized.push_back(parse_d(row[3]));
    t.high.push_back(row[4] == "1" ? 1 : 0);
    t.low.push_back(row[5] == "1" ? 1 : 0);
  }
  for (const auto& t : table.targets) {
    if (t.raw.size() != table.person_ids.size()) {
      throw std::runtime_error("targets CSV: trait '" + t.trait + "' row count mismatch");
    }
  }
  return table;
}

}  // namespace spendtraits
