#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "spendtraits/dates.hpp"

#include <nlohmann/json_fwd.hpp>

namespace spendtraits {

// Ordered category names; feature column indices depend on this ordering,
// so it is persisted and can be fixed externally to align train/test runs.
class CategoryVocabulary {
 public:
  CategoryVocabulary() = default;

  std::uint32_t add_or_get(const std::string& name);
  std::optional<std::uint32_t> find(const std::string& name) const;
  const std::string& name(std::uint32_t index) const;
  std::size_t size() const { return names_.size(); }
  const std::vector<std::string>& names() const { return names_; }

  nlohmann::ordered_json to_json() const;
  static CategoryVocabulary from_json(const nlohmann::json& j);

 private:
  std::vector<std::string> names_;
  std::unordered_map<std::string, std::uint32_t> index_;
};

struct TransactionRecord {
  Timestamp timestamp;
  double amount = 0.0;       // non-negative, US dollars
  std::uint32_t category = 0;  // index into the vocabulary
};

struct PersonLedger {
  std::string person_id;
  std::vector<TransactionRecord> records;  // sorted by timestamp
  DateWindow window;
};

struct LoadOptions {
  DateWindow window;
  // When set, unknown categories are a hard error and indices come from here.
  std::optional<CategoryVocabulary> fixed_vocabulary;
};

struct LoadResult {
  std::vector<PersonLedger> ledgers;  // sorted by person_id
  CategoryVocabulary vocabulary;
  std::size_t skipped_outside_window = 0;
};

// Expects header person_id,timestamp,amount,category. Rows with timestamps
// outside the window are skipped and counted; anything else malformed is a
// hard error naming the row.
LoadResult load_transactions(const std::filesystem::path& path, const LoadOptions& options);
LoadResult load_transactions_text(std::string_view csv_content, const LoadOptions& options);

struct FilterReport {
  std::size_t excluded_min_tx = 0;
  std::size_t excluded_min_spend = 0;
  std::size_t excluded_min_categories = 0;
  std::size_t retained = 0;

  nlohmann::ordered_json to_json() const;
};

struct FilterResult {
  std::vector<PersonLedger> ledgers;
  FilterReport report;
};

constexpr int kMinMonthlyTransactions = 5;
constexpr double kMinMonthlySpend = 100.0;
constexpr int kMinDistinctCategories = 5;

// Keeps a person iff every calendar month of the window has at least five
// transactions and $100 of spend, and the person used at least five distinct
// categories overall. A person failing several criteria is counted under each.
FilterResult apply_exclusion_filter(std::vector<PersonLedger> ledgers);

constexpr int kSurveyItemCount = 30;

struct SurveyTable {
  std::vector<std::string> person_ids;
  std::vector<std::array<int, kSurveyItemCount>> items;  // values 1..5

  std::size_t size() const { return person_ids.size(); }
  std::optional<std::size_t> find(const std::string& person_id) const;
};

// Expects header person_id,item_01,...,item_30. Duplicate person ids and
// item values outside 1..5 are hard errors.
SurveyTable load_survey(const std::filesystem::path& path);
SurveyTable load_survey_text(std::string_view csv_content);

struct AlignmentResult {
  SurveyTable survey;
  std::vector<PersonLedger> ledgers;
  std::size_t dropped_survey_rows = 0;  // in survey, not in ledgers
  std::size_t dropped_ledgers = 0;      // in ledgers, not in survey
};

// Intersects the survey and the filtered ledgers on person_id; mismatches on
// either side are dropped with a count. Output order is sorted by person_id.
AlignmentResult align_survey_with_ledgers(SurveyTable survey, std::vector<PersonLedger> ledgers);

void write_transactions_csv(const std::filesystem::path& path,
                            const std::vector<PersonLedger>& ledgers,
                            const CategoryVocabulary& vocabulary);
void write_survey_csv(const std::filesystem::path& path, const SurveyTable& survey);

}  // namespace spendtraits
