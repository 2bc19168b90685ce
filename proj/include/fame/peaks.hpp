#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "fame/parallel.hpp"
#include "fame/time.hpp"
#include "fame/timeline.hpp"

namespace fame {

enum class Method { Spike, Continuity };

[[nodiscard]] std::string_view to_string(Method m);
[[nodiscard]] Method parse_method(std::string_view s);

/// A name's period of fame as measured by one method.
///
/// For the spike method `start` is the first day of the first week in the
/// period and `end` the first day after its last week. For the continuity
/// method they are the first and last mention of the run.
struct FamePeriod {
  std::string name;
  Method method = Method::Continuity;
  Timestamp start;
  Timestamp end;
  Date peak_date;
  double duration_days = 0.0;

  friend bool operator==(const FamePeriod&, const FamePeriod&) = default;
};

/// Seven-day bins anchored at `origin`: bin i is [origin + 7i, origin + 7(i+1)).
struct WeekGrid {
  Date origin;

  /// The Monday on or before the window start.
  [[nodiscard]] static WeekGrid for_window(const AnalysisWindow& window);

  [[nodiscard]] std::int64_t week_of(Timestamp t) const;
  [[nodiscard]] Date week_start(std::int64_t week) const;
};

/// Gap between adjacent mentions that still counts as continuous attention.
inline constexpr std::int64_t kMaxContinuityGapSeconds = 7 * kSecondsPerDay;

/// Weekly-binned detector: contiguous weeks around the earliest busiest week
/// whose counts stay at or above a tenth of the maximum. Precondition:
/// non-empty timeline.
[[nodiscard]] FamePeriod spike_period(const Timeline& t, const WeekGrid& grid);

/// Longest run of mentions whose adjacent gaps are at most seven days,
/// earliest run on ties. Precondition: non-empty timeline.
[[nodiscard]] FamePeriod continuity_period(const Timeline& t);

/// One period per non-empty timeline, in input order.
[[nodiscard]] std::vector<FamePeriod> detect_periods(std::span<const Timeline> timelines,
                                                     Method method, const WeekGrid& grid,
                                                     Execution exec = Execution::Parallel);

/// Keeps periods lasting at least `min_duration` days that end before the
/// window end.
[[nodiscard]] std::vector<FamePeriod> period_filter(std::span<const FamePeriod> periods,
                                                    const AnalysisWindow& window,
                                                    double min_duration = 2.0);

/// Durations are persisted with at most three decimals; this applies the
/// same rounding so in-memory statistics match the CSV.
[[nodiscard]] double persisted_duration(double days);
[[nodiscard]] std::string format_duration(double days);

/// CSV with header `name,method,start,end,peak_date,duration_days`.
void write_periods(std::ostream& out, std::span<const FamePeriod> periods);
[[nodiscard]] std::vector<FamePeriod> read_periods(std::istream& in);

}  // namespace fame
