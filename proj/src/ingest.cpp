#include "spendtraits/ingest.hpp"

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

double parse_amount(const std::string& text, std::size_t record_number) {
  double value = 0.0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size() || !std::isfinite(value)) {
    throw std::runtime_error("transactions row " + std::to_string(record_number) +
                             ": amount '" + text + "' is not a valid decimal");
  }
  if (value < 0.0) {
    throw std::runtime_error("transactions row " + std::to_string(record_number) +
                             ": negative amount " + text);
  }
  return value;
}

void require_header(const std::vector<std::string>& header,
                    const std::vector<std::string>& expected, const char* what) {
  if (header != expected) {
    std::string want;
    for (const auto& h : expected) {
      if (!want.empty()) want += ",";
      want += h;
    }
    throw std::runtime_error(std::string(what) + ": unexpected header, expected '" + want + "'");
  }
}

}  // namespace

std::uint32_t CategoryVocabulary::add_or_get(const std::string& name) {
  auto it = index_.find(name);
  if (it != index_.end()) return it->second;
  auto idx = static_cast<std::uint32_t>(names_.size());
  names_.push_back(name);
  index_.emplace(name, idx);
  return idx;
}

std::optional<std::uint32_t> CategoryVocabulary::find(const std::string& name) const {
  auto it = index_.find(name);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

const std::string& CategoryVocabulary::name(std::uint32_t index) const {
  if (index >= names_.size()) throw std::out_of_range("category index out of range");
  return names_[index];
}

nlohmann::ordered_json CategoryVocabulary::to_json() const {
  return nlohmann::ordered_json{{"categories", names_}};
}

CategoryVocabulary CategoryVocabulary::from_json(const nlohmann::json& j) {
  CategoryVocabulary vocab;
  for (const auto& name : j.at("categories")) {
    std::string s = name.get<std::string>();
    if (vocab.find(s)) throw std::runtime_error("vocabulary: duplicate category '" + s + "'");
    vocab.add_or_get(s);
  }
  return vocab;
}

LoadResult load_transactions_text(std::string_view csv_content, const LoadOptions& options) {
  CsvTable table = parse_csv(csv_content);
  require_header(table.header, {"person_id", "timestamp", "amount", "category"}, "transactions");

  LoadResult result;
  const bool fixed = options.fixed_vocabulary.has_value();
  if (fixed) result.vocabulary = *options.fixed_vocabulary;

  std::map<std::string, std::vector<TransactionRecord>> by_person;
  for (std::size_t r = 0; r < table.records.size(); ++r) {
    const auto& row = table.records[r];
    const std::size_t rec_no = table.record_numbers[r];
    if (row[0].empty()) {
      throw std::runtime_error("transactions row " + std::to_string(rec_no) + ": empty person_id");
    }
    Timestamp ts;
    try {
      ts = parse_timestamp(row[1]);
    } catch (const std::exception& e) {
      throw std::runtime_error("transactions row " + std::to_string(rec_no) + ": " + e.what());
    }
    double amount = parse_amount(row[2], rec_no);
    if (row[3].empty()) {
      throw std::runtime_error("transactions row " + std::to_string(rec_no) + ": empty category");
    }
    if (!options.window.contains(ts)) {
      ++result.skipped_outside_window;
      continue;
    }
    std::uint32_t cat;
    if (fixed) {
      auto found = result.vocabulary.find(row[3]);
      if (!found) {
        throw std::runtime_error("transactions row " + std::to_string(rec_no) +
                                 ": unknown category '" + row[3] + "'");
      }
      cat = *found;
    } else {
      cat = result.vocabulary.add_or_get(row[3]);
    }
    by_person[row[0]].push_back(TransactionRecord{ts, amount, cat});
  }

  result.ledgers.reserve(by_person.size());
  for (auto& [person, records] : by_person) {
    std::stable_sort(records.begin(), records.end(),
                     [](const TransactionRecord& a, const TransactionRecord& b) {
                       return a.timestamp < b.timestamp;
                     });
    result.ledgers.push_back(PersonLedger{person, std::move(records), options.window});
  }
  return result;
}

LoadResult load_transactions(const std::filesystem::path& path, const LoadOptions& options) {
  return load_transactions_text(read_text_file(path), options);
}

nlohmann::ordered_json FilterReport::to_json() const {
  return nlohmann::ordered_json{{"excluded_min_tx", excluded_min_tx},
                                {"excluded_min_spend", excluded_min_spend},
                                {"excluded_min_categories", excluded_min_categories},
                                {"retained", retained}};
}

FilterResult apply_exclusion_filter(std::vector<PersonLedger> ledgers) {
  FilterResult result;
  for (auto& ledger : ledgers) {
    if (!ledger.window.aligned_to_months()) {
      throw std::invalid_argument("exclusion filter: window for person '" + ledger.person_id +
                                  "' does not span whole calendar months");
    }
    const int first_month = ledger.window.first_month_index();
    const int n_months = ledger.window.num_months();
    std::vector<int> tx_per_month(n_months, 0);
    std::vector<double> spend_per_month(n_months, 0.0);
    std::set<std::uint32_t> categories;
    for (const auto& rec : ledger.records) {
      int m = rec.timestamp.month_index() - first_month;
      tx_per_month[m] += 1;
      spend_per_month[m] += rec.amount;
      categories.insert(rec.category);
    }
    bool ok_tx = std::all_of(tx_per_month.begin(), tx_per_month.end(),
                             [](int n) { return n >= kMinMonthlyTransactions; });
    bool ok_spend = std::all_of(spend_per_month.begin(), spend_per_month.end(),
                                [](double s) { return s >= kMinMonthlySpend; });
    bool ok_cats = categories.size() >= static_cast<std::size_t>(kMinDistinctCategories);
    if (!ok_tx) ++result.report.excluded_min_tx;
    if (!ok_spend) ++result.report.excluded_min_spend;
    if (!ok_cats) ++result.report.excluded_min_categories;
    if (ok_tx && ok_spend && ok_cats) {
      result.ledgers.push_back(std::move(ledger));
    }
  }
  result.report.retained = result.ledgers.size();
  return result;
}

std::optional<std::size_t> SurveyTable::find(const std::string& person_id) const {
  for (std::size_t i = 0; i < person_ids.size(); ++i) {
    if (person_ids[i] == person_id) return i;
  }
  return std::nullopt;
}

SurveyTable load_survey_text(std::string_view csv_content) {
  CsvTable table = parse_csv(csv_content);
  std::vector<std::string> expected{"person_id"};
  for (int i = 1; i <= kSurveyItemCount; ++i) {
    char buf[16];
    std::snprintf(buf, sizeof(buf), "item_%02d", i);
    expected.push_back(buf);
  }
  require_header(table.header, expected, "survey");

  SurveyTable survey;
  std::set<std::string> seen;
  for (std::size_t r = 0; r < table.records.size(); ++r) {
    const auto& row = table.records[r];
    const std::size_t rec_no = table.record_numbers[r];
    if (!seen.insert(row[0]).second) {
      throw std::runtime_error("survey row " + std::to_string(rec_no) +
                               ": duplicate person_id '" + row[0] + "'");
    }
    std::array<int, kSurveyItemCount> items{};
    for (int i = 0; i < kSurveyItemCount; ++i) {
      const std::string& cell = row[static_cast<std::size_t>(i) + 1];
      int value = 0;
      auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), value);
      if (ec != std::errc{} || ptr != cell.data() + cell.size()) {
        throw std::runtime_error("survey row " + std::to_string(rec_no) + ": item_" +
                                 std::to_string(i + 1) + " value '" + cell + "' is not an integer");
      }
      if (value < 1 || value > 5) {
        throw std::runtime_error("survey row " + std::to_string(rec_no) + ": item_" +
                                 std::to_string(i + 1) + " value " + cell + " outside 1..5");
      }
      items[static_cast<std::size_t>(i)] = value;
    }
    survey.person_ids.push_back(row[0]);
    survey.items.push_back(items);
  }
  return survey;
}

SurveyTable load_survey(const std::filesystem::path& path) {
  return load_survey_text(read_text_file(path));
}

AlignmentResult align_survey_with_ledgers(SurveyTable survey, std::vector<PersonLedger> ledgers) {
  std::set<std::string> ledger_ids;
  for (const auto& l : ledgers) ledger_ids.insert(l.person_id);
  std::set<std::string> survey_ids(survey.person_ids.begin(), survey.person_ids.end());

  AlignmentResult result;
  // Keep survey rows sorted by person_id so downstream row order is stable.
  std::vector<std::size_t> order(survey.person_ids.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return survey.person_ids[a] < survey.person_ids[b];
  });
  for (std::size_t i : order) {
    if (ledger_ids.count(survey.person_ids[i])) {
      result.survey.person_ids.push_back(survey.person_ids[i]);
      result.survey.items.push_back(survey.items[i]);
    } else {
      ++result.dropped_survey_rows;
    }
  }
  for (auto& ledger : ledgers) {
    if (survey_ids.count(ledger.person_id)) {
      result.ledgers.push_back(std::move(ledger));
    } else {
      ++result.dropped_ledgers;
    }
  }
  std::sort(result.ledgers.begin(), result.ledgers.end(),
            [](const PersonLedger& a, const PersonLedger& b) { return a.person_id < b.person_id; });
  return result;
}

void write_transactions_csv(const std::filesystem::path& path,
                            const std::vector<PersonLedger>& ledgers,
                            const CategoryVocabulary& vocabulary) {
  std::string out = "person_id,timestamp,amount,category\n";
  char amount_buf[32];
  for (const auto& ledger : ledgers) {
    for (const auto& rec : ledger.records) {
      std::snprintf(amount_buf, sizeof(amount_buf), "%.2f", rec.amount);
      out += csv_escape(ledger.person_id);
      out += ',';
      out += format_timestamp(rec.timestamp);
      out += ',';
      out += amount_buf;
      out += ',';
      out += csv_escape(vocabulary.name(rec.category));
      out += '\n';
    }
  }
  write_text_file(path, out);
}

void write_survey_csv(const std::filesystem::path& path, const SurveyTable& survey) {
  std::string out = "person_id";
  for (int i = 1; i <= kSurveyItemCount; ++i) {
    char buf[16];
    std::snprintf(buf, sizeof(buf), ",item_%02d", i);
    out += buf;
  }
  out += '\n';
  for (std::size_t r = 0; r < survey.size(); ++r) {
    out += csv_escape(survey.person_ids[r]);
    for (int v : survey.items[r]) {
      out += ',';
      out += std::to_string(v);
    }
    out += '\n';
  }
  write_text_file(path, out);
}

}  // namespace spendtraits
