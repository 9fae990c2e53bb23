#include "spendtraits/dates.hpp"

#include <charconv>
#include <cstdio>
#include <stdexcept>

namespace spendtraits {

namespace {

constexpr std::int64_t kSecondsPerDay = 86400;

bool is_leap(int y) { return (y % 4 == 0 && y % 100 != 0) || y % 400 == 0; }

int parse_int_field(std::string_view text, std::size_t pos, std::size_t len) {
  if (pos + len > text.size()) throw std::invalid_argument("truncated date/time field");
  int value = 0;
  auto [ptr, ec] = std::from_chars(text.data() + pos, text.data() + pos + len, value);
  if (ec != std::errc{} || ptr != text.data() + pos + len) {
    throw std::invalid_argument("non-numeric date/time field");
  }
  return value;
}

}  // namespace

// Howard Hinnant's civil-date algorithms.
std::int64_t days_from_civil(const Date& d) {
  int y = d.year;
  unsigned m = static_cast<unsigned>(d.month);
  unsigned day = static_cast<unsigned>(d.day);
  y -= m <= 2;
  const std::int64_t era = (y >= 0 ? y : y - 399) / 400;
  const unsigned yoe = static_cast<unsigned>(y - era * 400);
  const unsigned doy = (153 * (m + (m > 2 ? -3 : 9)) + 2) / 5 + day - 1;
  const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
  return era * 146097 + static_cast<std::int64_t>(doe) - 719468;
}

Date civil_from_days(std::int64_t z) {
  z += 719468;
  const std::int64_t era = (z >= 0 ? z : z - 146096) / 146097;
  const unsigned doe = static_cast<unsigned>(z - era * 146097);
  const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
  const std::int64_t y = static_cast<std::int64_t>(yoe) + era * 400;
  const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
  const unsigned mp = (5 * doy + 2) / 153;
  const unsigned day = doy - (153 * mp + 2) / 5 + 1;
  const unsigned m = mp + (mp < 10 ? 3 : -9);
  return Date{static_cast<int>(y + (m <= 2)), static_cast<int>(m), static_cast<int>(day)};
}

int days_in_month(int year, int month) {
  static const int lengths[] = {31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
  if (month < 1 || month > 12) throw std::invalid_argument("month out of range");
  if (month == 2 && is_leap(year)) return 29;
  return lengths[month - 1];
}

bool is_valid_date(const Date& d) {
  return d.month >= 1 && d.month <= 12 && d.day >= 1 &&
         d.day <= days_in_month(d.year, d.month);
}

Date Timestamp::date() const {
  std::int64_t days = epoch_seconds >= 0 ? epoch_seconds / kSecondsPerDay
                                         : (epoch_seconds - kSecondsPerDay + 1) / kSecondsPerDay;
  return civil_from_days(days);
}

std::int64_t Timestamp::day_number() const {
  return epoch_seconds >= 0 ? epoch_seconds / kSecondsPerDay
                            : (epoch_seconds - kSecondsPerDay + 1) / kSecondsPerDay;
}

Date parse_date(std::string_view text) {
  if (text.size() != 10 || text[4] != '-' || text[7] != '-') {
    throw std::invalid_argument("expected YYYY-MM-DD, got '" + std::string(text) + "'");
  }
  Date d{parse_int_field(text, 0, 4), parse_int_field(text, 5, 2), parse_int_field(text, 8, 2)};
  if (!is_valid_date(d)) {
    throw std::invalid_argument("invalid calendar date '" + std::string(text) + "'");
  }
  return d;
}

Timestamp parse_timestamp(std::string_view text) {
  if (text.size() < 10) {
    throw std::invalid_argument("timestamp too short: '" + std::string(text) + "'");
  }
  Date d = parse_date(text.substr(0, 10));
  std::int64_t secs = days_from_civil(d) * kSecondsPerDay;
  std::string_view rest = text.substr(10);
  if (!rest.empty()) {
    if (rest[0] != 'T' && rest[0] != ' ') {
      throw std::invalid_argument("expected 'T' or ' ' separator in '" + std::string(text) + "'");
    }
    rest.remove_prefix(1);
    if (!rest.empty() && rest.back() == 'Z') rest.remove_suffix(1);
    if (rest.size() != 5 && rest.size() != 8) {
      throw std::invalid_argument("expected HH:MM[:SS] in '" + std::string(text) + "'");
    }
    int hh = parse_int_field(rest, 0, 2);
    if (rest[2] != ':') throw std::invalid_argument("malformed time in '" + std::string(text) + "'");
    int mm = parse_int_field(rest, 3, 2);
    int ss = 0;
    if (rest.size() == 8) {
      if (rest[5] != ':') throw std::invalid_argument("malformed time in '" + std::string(text) + "'");
      ss = parse_int_field(rest, 6, 2);
    }
    if (hh > 23 || mm > 59 || ss > 59 || hh < 0 || mm < 0 || ss < 0) {
      throw std::invalid_argument("time of day out of range in '" + std::string(text) + "'");
    }
    secs += hh * 3600 + mm * 60 + ss;
  }
  return Timestamp{secs};
}

std::string format_date(const Date& d) {
  char buf[16];
  std::snprintf(buf, sizeof(buf), "%04d-%02d-%02d", d.year, d.month, d.day);
  return buf;
}

std::string format_timestamp(const Timestamp& ts) {
  Date d = ts.date();
  std::int64_t rem = ts.epoch_seconds - ts.day_number() * kSecondsPerDay;
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%04d-%02d-%02dT%02d:%02d:%02dZ", d.year, d.month, d.day,
                static_cast<int>(rem / 3600), static_cast<int>((rem / 60) % 60),
                static_cast<int>(rem % 60));
  return buf;
}

bool DateWindow::contains(const Timestamp& ts) const {
  std::int64_t day = ts.day_number();
  return day >= days_from_civil(start) && day <= days_from_civil(end);
}

int DateWindow::num_days() const {
  return static_cast<int>(days_from_civil(end) - days_from_civil(start)) + 1;
}

int DateWindow::num_months() const {
  return end.month_index() - start.month_index() + 1;
}

bool DateWindow::aligned_to_months() const {
  return start.day == 1 && end.day == days_in_month(end.year, end.month);
}

}  // namespace spendtraits
