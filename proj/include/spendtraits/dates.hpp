#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace spendtraits {

struct Date {
  int year = 0;
  int month = 1;  // 1..12
  int day = 1;    // 1..31

  bool operator==(const Date&) const = default;
  // Months since year 0, used to bucket transactions by calendar month.
  int month_index() const { return year * 12 + (month - 1); }
};

// Days since 1970-01-01 (proleptic Gregorian).
std::int64_t days_from_civil(const Date& d);
Date civil_from_days(std::int64_t z);
int days_in_month(int year, int month);
bool is_valid_date(const Date& d);

// UTC instant. Parsed from ISO 8601: YYYY-MM-DD[{T| }HH:MM[:SS]][Z].
struct Timestamp {
  std::int64_t epoch_seconds = 0;

  Date date() const;
  int month_index() const { return date().month_index(); }
  std::int64_t day_number() const;

  auto operator<=>(const Timestamp&) const = default;
};

Timestamp parse_timestamp(std::string_view text);
Date parse_date(std::string_view text);
std::string format_timestamp(const Timestamp& ts);
std::string format_date(const Date& d);

// Inclusive calendar-date range.
struct DateWindow {
  Date start;
  Date end;

  bool contains(const Timestamp& ts) const;
  int num_days() const;
  int num_months() const;
  // True when start is the first day of its month and end the last of its.
  bool aligned_to_months() const;
  int first_month_index() const { return start.month_index(); }

  bool operator==(const DateWindow&) const = default;
};

}  // namespace spendtraits
