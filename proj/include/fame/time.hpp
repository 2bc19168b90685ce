#pragma once

#include <chrono>
#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace fame {

// Calendar day and UTC instant. Date-only inputs are stored as midnight.
using Date = std::chrono::sys_days;
using Timestamp = std::chrono::sys_seconds;

inline constexpr std::int64_t kSecondsPerDay = 86400;

struct YearMonth {
  int year = 1970;
  unsigned month = 1;  // 1..12

  /// Months since year 0; monotone in calendar order.
  [[nodiscard]] std::int64_t index() const { return std::int64_t{year} * 12 + (month - 1); }
  [[nodiscard]] Date first_day() const;
  [[nodiscard]] YearMonth next() const;
  [[nodiscard]] std::string str() const;  // "YYYY-MM"

  friend auto operator<=>(const YearMonth&, const YearMonth&) = default;
};

[[nodiscard]] Date day_of(Timestamp t);
[[nodiscard]] Timestamp midnight(Date d);
[[nodiscard]] YearMonth month_of(Date d);
[[nodiscard]] YearMonth month_of(Timestamp t);
[[nodiscard]] int year_of(Timestamp t);
[[nodiscard]] bool has_time_of_day(Timestamp t);

/// Signed difference b - a in (possibly fractional) days.
[[nodiscard]] double days_between(Timestamp a, Timestamp b);

/// Strict ISO-8601 date "YYYY-MM-DD", year 0001..9999.
[[nodiscard]] std::optional<Date> parse_date(std::string_view s);

/// Parsed timestamp plus whether the text carried a time of day.
struct ParsedTimestamp {
  Timestamp at;
  bool has_time = false;
};

/// Accepts "YYYY-MM-DD" and "YYYY-MM-DD[T ]HH:MM[:SS[.fff]][Z|±HH:MM]".
/// Offsets are folded into UTC; fractional seconds are truncated.
[[nodiscard]] std::optional<ParsedTimestamp> parse_timestamp(std::string_view s);

/// "YYYY-MM" or a first-of-month "YYYY-MM-01".
[[nodiscard]] std::optional<YearMonth> parse_year_month(std::string_view s);

[[nodiscard]] std::string format_date(Date d);
/// "YYYY-MM-DDTHH:MM:SSZ".
[[nodiscard]] std::string format_datetime(Timestamp t);
/// Date when t is midnight, otherwise the full date-time.
[[nodiscard]] std::string format_timestamp(Timestamp t);

/// Half-open [start, end) span of calendar months.
class AnalysisWindow {
 public:
  /// Throws ConfigError unless start < end.
  AnalysisWindow(YearMonth start, YearMonth end);

  [[nodiscard]] Date start() const { return start_.first_day(); }
  [[nodiscard]] Date end() const { return end_.first_day(); }
  [[nodiscard]] YearMonth start_month() const { return start_; }
  [[nodiscard]] YearMonth end_month() const { return end_; }
  [[nodiscard]] bool contains(Timestamp t) const {
    return t >= midnight(start()) && t < midnight(end());
  }

  friend bool operator==(const AnalysisWindow&, const AnalysisWindow&) = default;

 private:
  YearMonth start_;
  YearMonth end_;
};

}  // namespace fame
