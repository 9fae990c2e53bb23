#include "spendtraits/features.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <set>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "spendtraits/csv.hpp"

namespace spendtraits {

namespace {

const char* const kOverallNames[FeatureRegistry::kOverallCount] = {
    "n_tot", "a_tot", "a_avg", "a_cv", "a_avg_daily", "a_cv_daily"};

double population_cv(const std::vector<double>& values) {
  if (values.empty()) return 0.0;
  double mean = 0.0;
  for (double v : values) mean += v;
  mean /= static_cast<double>(values.size());
  if (mean == 0.0) return 0.0;
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  double sd = std::sqrt(ss / static_cast<double>(values.size()));
  return sd / mean;
}

const char* kind_label(FeatureKind kind) {
  switch (kind) {
    case FeatureKind::Overall: return "overall";
    case FeatureKind::CountShare: return "count_share";
    case FeatureKind::AmountShare: return "amount_share";
    case FeatureKind::Diversity: return "diversity";
  }
  return "unknown";
}

}  // namespace

nlohmann::ordered_json FeatureOptions::to_json() const {
  return nlohmann::ordered_json{{"entropy_base", "e"},
                                {"entropy_on_amount_shares", entropy_on_amount_shares},
                                {"daily_cv_active_days_only", daily_cv_active_days_only}};
}

FeatureOptions FeatureOptions::from_json(const nlohmann::json& j) {
  FeatureOptions options;
  options.entropy_on_amount_shares = j.value("entropy_on_amount_shares", false);
  options.daily_cv_active_days_only = j.value("daily_cv_active_days_only", false);
  return options;
}

FeatureRegistry FeatureRegistry::for_vocabulary(const CategoryVocabulary& vocab,
                                                const FeatureOptions& options) {
  FeatureRegistry reg;
  reg.options_ = options;
  reg.category_count_ = vocab.size();
  reg.names_.reserve(kOverallCount + 2 * vocab.size() + 2);
  for (const char* name : kOverallNames) {
    reg.names_.emplace_back(name);
    reg.kinds_.push_back(FeatureKind::Overall);
  }
  for (const auto& cat : vocab.names()) {
    reg.names_.push_back(cat);
    reg.kinds_.push_back(FeatureKind::CountShare);
    reg.names_.push_back(cat + " ($)");
    reg.kinds_.push_back(FeatureKind::AmountShare);
  }
  reg.names_.emplace_back("C_tot");
  reg.kinds_.push_back(FeatureKind::Diversity);
  reg.names_.emplace_back("C_entropy");
  reg.kinds_.push_back(FeatureKind::Diversity);

  std::set<std::string> unique(reg.names_.begin(), reg.names_.end());
  if (unique.size() != reg.names_.size()) {
    throw std::runtime_error("feature registry: category names collide with reserved names");
  }
  return reg;
}

std::size_t FeatureRegistry::count_share_index(std::size_t category) const {
  if (category >= category_count_) throw std::out_of_range("category index out of range");
  return kOverallCount + 2 * category;
}

std::size_t FeatureRegistry::amount_share_index(std::size_t category) const {
  if (category >= category_count_) throw std::out_of_range("category index out of range");
  return kOverallCount + 2 * category + 1;
}

std::size_t FeatureRegistry::index_of(const std::string& name) const {
  auto it = std::find(names_.begin(), names_.end(), name);
  if (it == names_.end()) throw std::runtime_error("feature registry: unknown feature '" + name + "'");
  return static_cast<std::size_t>(it - names_.begin());
}

nlohmann::ordered_json FeatureRegistry::to_json() const {
  nlohmann::ordered_json features = nlohmann::ordered_json::array();
  for (std::size_t i = 0; i < names_.size(); ++i) {
    features.push_back({{"name", names_[i]}, {"kind", kind_label(kinds_[i])}});
  }
  return nlohmann::ordered_json{{"category_count", category_count_},
                                {"options", options_.to_json()},
                                {"features", features}};
}

FeatureRegistry FeatureRegistry::from_json(const nlohmann::json& j) {
  FeatureRegistry reg;
  reg.category_count_ = j.at("category_count").get<std::size_t>();
  reg.options_ = FeatureOptions::from_json(j.at("options"));
  for (const auto& f : j.at("features")) {
    reg.names_.push_back(f.at("name").get<std::string>());
    std::string kind = f.at("kind").get<std::string>();
    if (kind == "overall") reg.kinds_.push_back(FeatureKind::Overall);
    else if (kind == "count_share") reg.kinds_.push_back(FeatureKind::CountShare);
    else if (kind == "amount_share") reg.kinds_.push_back(FeatureKind::AmountShare);
    else if (kind == "diversity") reg.kinds_.push_back(FeatureKind::Diversity);
    else throw std::runtime_error("feature registry: unknown kind '" + kind + "'");
  }
  if (reg.names_.size() != FeatureRegistry::kOverallCount + 2 * reg.category_count_ + 2) {
    throw std::runtime_error("feature registry: size does not match category count");
  }
  return reg;
}

std::array<double, FeatureRegistry::kOverallCount> compute_overall_features(
    const PersonLedger& ledger, const FeatureOptions& options) {
  if (ledger.records.empty()) {
    throw std::invalid_argument("overall features: empty ledger for person '" +
                                ledger.person_id + "'");
  }
  const auto n_tot = static_cast<double>(ledger.records.size());
  std::vector<double> amounts;
  amounts.reserve(ledger.records.size());
  double a_tot = 0.0;
  for (const auto& rec : ledger.records) {
    amounts.push_back(rec.amount);
    a_tot += rec.amount;
  }
  const double a_avg = a_tot / n_tot;
  const double a_cv = population_cv(amounts);

  const int window_days = ledger.window.num_days();
  const std::int64_t first_day = days_from_civil(ledger.window.start);
  std::vector<double> daily(static_cast<std::size_t>(window_days), 0.0);
  for (const auto& rec : ledger.records) {
    auto offset = static_cast<std::size_t>(rec.timestamp.day_number() - first_day);
    daily[offset] += rec.amount;
  }
  if (options.daily_cv_active_days_only) {
    daily.erase(std::remove(daily.begin(), daily.end(), 0.0), daily.end());
  }
  const double a_avg_daily = a_tot / static_cast<double>(window_days);
  const double a_cv_daily = population_cv(daily);

  return {n_tot, a_tot, a_avg, a_cv, a_avg_daily, a_cv_daily};
}

std::vector<double> compute_category_features(const PersonLedger& ledger,
                                              const CategoryVocabulary& vocab,
                                              const FeatureOptions& options) {
  const std::size_t k = vocab.size();
  std::vector<double> counts(k, 0.0);
  std::vector<double> amounts(k, 0.0);
  double n_tot = 0.0;
  double a_tot = 0.0;
  for (const auto& rec : ledger.records) {
    if (rec.category >= k) {
      throw std::runtime_error("category features: person '" + ledger.person_id +
                               "' references category index " + std::to_string(rec.category) +
                               " outside the vocabulary (size " + std::to_string(k) + ")");
    }
    counts[rec.category] += 1.0;
    amounts[rec.category] += rec.amount;
    n_tot += 1.0;
    a_tot += rec.amount;
  }

  std::vector<double> out(2 * k + 2, 0.0);
  double c_tot = 0.0;
  for (std::size_t c = 0; c < k; ++c) {
    double n_share = n_tot > 0.0 ? counts[c] / n_tot : 0.0;
    double a_share = a_tot > 0.0 ? amounts[c] / a_tot : 0.0;
    out[2 * c] = n_share;
    out[2 * c + 1] = a_share;
    if (n_share > 0.0) c_tot += 1.0;
  }
  double entropy = 0.0;
  for (std::size_t c = 0; c < k; ++c) {
    double p = options.entropy_on_amount_shares ? out[2 * c + 1] : out[2 * c];
    if (p > 0.0) entropy -= p * std::log(p);
  }
  out[2 * k] = c_tot;
  out[2 * k + 1] = entropy;
  return out;
}

std::vector<double> compute_feature_vector(const PersonLedger& ledger,
                                           const CategoryVocabulary& vocab,
                                           const FeatureOptions& options) {
  auto overall = compute_overall_features(ledger, options);
  auto category = compute_category_features(ledger, vocab, options);
  std::vector<double> out;
  out.reserve(overall.size() + category.size());
  out.insert(out.end(), overall.begin(), overall.end());
  out.insert(out.end(), category.begin(), category.end());
  return out;
}

FeatureMatrix build_feature_matrix(const std::vector<PersonLedger>& ledgers,
                                   const CategoryVocabulary& vocab,
                                   const FeatureOptions& options) {
  std::vector<std::size_t> order(ledgers.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return ledgers[a].person_id < ledgers[b].person_id;
  });

  const std::size_t cols = FeatureRegistry::kOverallCount + 2 * vocab.size() + 2;
  FeatureMatrix matrix;
  matrix.x = Matrix(ledgers.size(), cols);
  matrix.person_ids.reserve(ledgers.size());
  for (std::size_t r = 0; r < order.size(); ++r) {
    const auto& ledger = ledgers[order[r]];
    matrix.person_ids.push_back(ledger.person_id);
    auto vec = compute_feature_vector(ledger, vocab, options);
    std::copy(vec.begin(), vec.end(), matrix.x.row(r).begin());
  }
  return matrix;
}

void write_feature_matrix_csv(const std::filesystem::path& path, const FeatureMatrix& matrix,
                              const FeatureRegistry& registry) {
  if (registry.size() != matrix.x.cols) {
    throw std::invalid_argument("feature matrix / registry column mismatch");
  }
  std::string out = "person_id";
  for (const auto& name : registry.names()) {
    out += ',';
    out += csv_escape(name);
  }
  out += '\n';
  for (std::size_t r = 0; r < matrix.x.rows; ++r) {
    out += csv_escape(matrix.person_ids[r]);
    for (double v : matrix.x.row(r)) {
      out += ',';
      out += format_double(v);
    }
    out += '\n';
  }
  write_text_file(path, out);
}

FeatureMatrix read_feature_matrix_csv(const std::filesystem::path& path,
                                      const FeatureRegistry& registry) {
  CsvTable table = parse_csv_file(path);
  if (table.header.size() != registry.size() + 1 || table.header[0] != "person_id") {
    throw std::runtime_error("feature matrix CSV: unexpected header in " + path.string());
  }
  for (std::size_t i = 0; i < registry.size(); ++i) {
    if (table.header[i + 1] != registry.name(i)) {
      throw std::runtime_error("feature matrix CSV: column '" + table.header[i + 1] +
                               "' does not match registry feature '" + registry.name(i) + "'");
    }
  }
  FeatureMatrix matrix;
  matrix.x = Matrix(table.records.size(), registry.size());
  for (std::size_t r = 0; r < table.records.size(); ++r) {
    matrix.person_ids.push_back(table.records[r][0]);
    for (std::size_t c = 0; c < registry.size(); ++c) {
      const std::string& cell = table.records[r][c + 1];
      double value = 0.0;
      auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), value);
      if (ec != std::errc{} || ptr != cell.data() + cell.size()) {
        throw std::runtime_error("feature matrix CSV: row " +
                                 std::to_string(table.record_numbers[r]) + ": bad value '" +
                                 cell + "'");
      }
      matrix.x.at(r, c) = value;
    }
  }
  return matrix;
}

}  // namespace spendtraits
