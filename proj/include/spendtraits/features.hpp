#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "spendtraits/ingest.hpp"
#include "spendtraits/matrix.hpp"

namespace spendtraits {

enum class FeatureKind : std::uint8_t {
  Overall,      // n_tot, a_tot, a_avg, a_cv, a_avg_daily, a_cv_daily
  CountShare,   // relative number of transactions in a category
  AmountShare,  // relative amount of money spent in a category
  Diversity,    // C_tot, C_entropy
};

struct FeatureOptions {
  // Entropy defaults to transaction-count shares with natural log.
  bool entropy_on_amount_shares = false;
  // Daily variability defaults to all calendar days (zero-spend days included).
  bool daily_cv_active_days_only = false;

  nlohmann::ordered_json to_json() const;
  static FeatureOptions from_json(const nlohmann::json& j);
};

// Column layout: six overall features, then (count share, amount share) per
// category in vocabulary order, then C_tot and C_entropy.
class FeatureRegistry {
 public:
  static constexpr std::size_t kNumTransactions = 0;  // n_tot
  static constexpr std::size_t kTotalAmount = 1;      // a_tot
  static constexpr std::size_t kAvgAmount = 2;        // a_avg
  static constexpr std::size_t kAmountCv = 3;         // a_cv
  static constexpr std::size_t kAvgDaily = 4;         // a_avg_daily
  static constexpr std::size_t kDailyCv = 5;          // a_cv_daily
  static constexpr std::size_t kOverallCount = 6;

  static FeatureRegistry for_vocabulary(const CategoryVocabulary& vocab,
                                        const FeatureOptions& options = {});

  std::size_t size() const { return names_.size(); }
  const std::string& name(std::size_t i) const { return names_.at(i); }
  FeatureKind kind(std::size_t i) const { return kinds_.at(i); }
  const std::vector<std::string>& names() const { return names_; }
  const FeatureOptions& options() const { return options_; }
  std::size_t category_count() const { return category_count_; }

  std::size_t count_share_index(std::size_t category) const;
  std::size_t amount_share_index(std::size_t category) const;
  std::size_t c_tot_index() const { return kOverallCount + 2 * category_count_; }
  std::size_t entropy_index() const { return kOverallCount + 2 * category_count_ + 1; }

  // Index lookup by registry name; throws if absent.
  std::size_t index_of(const std::string& name) const;

  nlohmann::ordered_json to_json() const;
  static FeatureRegistry from_json(const nlohmann::json& j);

 private:
  std::vector<std::string> names_;
  std::vector<FeatureKind> kinds_;
  std::size_t category_count_ = 0;
  FeatureOptions options_;
};

// n_tot, a_tot, a_avg, a_cv, a_avg_daily, a_cv_daily. Variability is the
// population coefficient of variation; daily totals cover every calendar day
// of the window unless options say otherwise. Throws on an empty ledger.
std::array<double, FeatureRegistry::kOverallCount> compute_overall_features(
    const PersonLedger& ledger, const FeatureOptions& options = {});

// Count/amount share per category plus C_tot and C_entropy, in registry order.
std::vector<double> compute_category_features(const PersonLedger& ledger,
                                              const CategoryVocabulary& vocab,
                                              const FeatureOptions& options = {});

std::vector<double> compute_feature_vector(const PersonLedger& ledger,
                                           const CategoryVocabulary& vocab,
                                           const FeatureOptions& options = {});

struct FeatureMatrix {
  std::vector<std::string> person_ids;  // sorted ascending
  Matrix x;
};

FeatureMatrix build_feature_matrix(const std::vector<PersonLedger>& ledgers,
                                   const CategoryVocabulary& vocab,
                                   const FeatureOptions& options = {});

void write_feature_matrix_csv(const std::filesystem::path& path, const FeatureMatrix& matrix,
                              const FeatureRegistry& registry);
FeatureMatrix read_feature_matrix_csv(const std::filesystem::path& path,
                                      const FeatureRegistry& registry);

}  // namespace spendtraits
