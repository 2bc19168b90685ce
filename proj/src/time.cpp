#include "fame/time.hpp"

#include <charconv>

#include <fmt/format.h>

#include "fame/errors.hpp"

namespace fame {

namespace chr = std::chrono;

namespace {

// Parses exactly `width` ASCII digits at s[pos..).
std::optional<int> fixed_digits(std::string_view s, std::size_t pos, std::size_t width) {
  if (pos + width > s.size()) return std::nullopt;
  int value = 0;
  for (std::size_t i = pos; i < pos + width; ++i) {
    if (s[i] < '0' || s[i] > '9') return std::nullopt;
    value = value * 10 + (s[i] - '0');
  }
  return value;
}

std::optional<Date> make_date(int y, int m, int d) {
  if (y < 1 || y > 9999) return std::nullopt;
  const chr::year_month_day ymd{chr::year{y}, chr::month{static_cast<unsigned>(m)},
                                chr::day{static_cast<unsigned>(d)}};
  if (!ymd.ok()) return std::nullopt;
  return Date{ymd};
}

}  // namespace

Date YearMonth::first_day() const {
  return Date{chr::year{year} / chr::month{month} / chr::day{1}};
}

YearMonth YearMonth::next() const {
  return month == 12 ? YearMonth{year + 1, 1} : YearMonth{year, month + 1};
}

std::string YearMonth::str() const { return fmt::format("{:04d}-{:02d}", year, month); }

Date day_of(Timestamp t) { return chr::floor<chr::days>(t); }

Timestamp midnight(Date d) { return Timestamp{d}; }

YearMonth month_of(Date d) {
  const chr::year_month_day ymd{d};
  return {static_cast<int>(ymd.year()), static_cast<unsigned>(ymd.month())};
}

YearMonth month_of(Timestamp t) { return month_of(day_of(t)); }

int year_of(Timestamp t) { return month_of(t).year; }

bool has_time_of_day(Timestamp t) { return t != midnight(day_of(t)); }

double days_between(Timestamp a, Timestamp b) {
  return static_cast<double>((b - a).count()) / static_cast<double>(kSecondsPerDay);
}

std::optional<Date> parse_date(std::string_view s) {
  if (s.size() != 10 || s[4] != '-' || s[7] != '-') return std::nullopt;
  const auto y = fixed_digits(s, 0, 4);
  const auto m = fixed_digits(s, 5, 2);
  const auto d = fixed_digits(s, 8, 2);
  if (!y || !m || !d) return std::nullopt;
  return make_date(*y, *m, *d);
}

std::optional<ParsedTimestamp> parse_timestamp(std::string_view s) {
  if (s.size() < 10) return std::nullopt;
  const auto date = parse_date(s.substr(0, 10));
  if (!date) return std::nullopt;
  if (s.size() == 10) return ParsedTimestamp{midnight(*date), false};

  if (s[10] != 'T' && s[10] != ' ') return std::nullopt;
  std::size_t pos = 11;
  const auto hh = fixed_digits(s, pos, 2);
  if (!hh || pos + 2 >= s.size() || s[pos + 2] != ':') return std::nullopt;
  const auto mm = fixed_digits(s, pos + 3, 2);
  if (!mm) return std::nullopt;
  pos += 5;
  int ss = 0;
  if (pos < s.size() && s[pos] == ':') {
    const auto sec = fixed_digits(s, pos + 1, 2);
    if (!sec) return std::nullopt;
    ss = *sec;
    pos += 3;
    if (pos < s.size() && s[pos] == '.') {
      ++pos;
      const std::size_t frac_start = pos;
      while (pos < s.size() && s[pos] >= '0' && s[pos] <= '9') ++pos;
      if (pos == frac_start) return std::nullopt;
    }
  }
  if (*hh > 23 || *mm > 59 || ss > 60) return std::nullopt;

  chr::seconds offset{0};
  if (pos < s.size()) {
    if (s[pos] == 'Z' && pos + 1 == s.size()) {
      ++pos;
    } else if ((s[pos] == '+' || s[pos] == '-') && pos + 6 == s.size() && s[pos + 3] == ':') {
      const auto oh = fixed_digits(s, pos + 1, 2);
      const auto om = fixed_digits(s, pos + 4, 2);
      if (!oh || !om || *oh > 23 || *om > 59) return std::nullopt;
      offset = chr::hours{*oh} + chr::minutes{*om};
      if (s[pos] == '-') offset = -offset;
      pos += 6;
    } else {
      return std::nullopt;
    }
  }
  const Timestamp local = midnight(*date) + chr::hours{*hh} + chr::minutes{*mm} + chr::seconds{ss};
  const Timestamp utc = local - offset;
  const int y = year_of(utc);
  if (y < 1 || y > 9999) return std::nullopt;
  return ParsedTimestamp{utc, true};
}

std::optional<YearMonth> parse_year_month(std::string_view s) {
  if (s.size() == 7 && s[4] == '-') {
    const auto y = fixed_digits(s, 0, 4);
    const auto m = fixed_digits(s, 5, 2);
    if (!y || !m || *y < 1 || *m < 1 || *m > 12) return std::nullopt;
    return YearMonth{*y, static_cast<unsigned>(*m)};
  }
  const auto d = parse_date(s);
  if (!d) return std::nullopt;
  const chr::year_month_day ymd{*d};
  if (ymd.day() != chr::day{1}) return std::nullopt;
  return month_of(*d);
}

std::string format_date(Date d) {
  const chr::year_month_day ymd{d};
  return fmt::format("{:04d}-{:02d}-{:02d}", static_cast<int>(ymd.year()),
                     static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()));
}

std::string format_datetime(Timestamp t) {
  const Date d = day_of(t);
  const chr::hh_mm_ss hms{t - midnight(d)};
  return fmt::format("{}T{:02d}:{:02d}:{:02d}Z", format_date(d), hms.hours().count(),
                     hms.minutes().count(), hms.seconds().count());
}

std::string format_timestamp(Timestamp t) {
  return has_time_of_day(t) ? format_datetime(t) : format_date(day_of(t));
}

AnalysisWindow::AnalysisWindow(YearMonth start, YearMonth end) : start_(start), end_(end) {
  if (!(start < end)) {
    throw ConfigError("analysis window start " + start.str() + " must precede end " + end.str());
  }
}

}  // namespace fame
