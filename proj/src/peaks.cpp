#include "fame/peaks.hpp"

#include <cassert>
#include <charconv>
#include <cmath>
#include <istream>
#include <ostream>

#include <fmt/format.h>

#include "fame/csv.hpp"
#include "fame/errors.hpp"

namespace fame {

namespace chr = std::chrono;

std::string_view to_string(Method m) { return m == Method::Spike ? "spike" : "continuity"; }

Method parse_method(std::string_view s) {
  if (s == "spike") return Method::Spike;
  if (s == "continuity") return Method::Continuity;
  throw ConfigError("unknown method '" + std::string(s) + "'");
}

WeekGrid WeekGrid::for_window(const AnalysisWindow& window) {
  const Date start = window.start();
  const chr::weekday wd{start};
  return {start - (wd - chr::Monday)};
}

std::int64_t WeekGrid::week_of(Timestamp t) const {
  const auto offset = (t - midnight(origin)).count();
  constexpr std::int64_t week = 7 * kSecondsPerDay;
  return offset >= 0 ? offset / week : -((-offset + week - 1) / week);
}

Date WeekGrid::week_start(std::int64_t week) const { return origin + chr::days{7 * week}; }

FamePeriod spike_period(const Timeline& t, const WeekGrid& grid) {
  assert(!t.empty());
  struct WeekCount {
    std::int64_t week;
    std::int64_t count;
  };
  std::vector<WeekCount> weeks;
  for (const auto& e : t.events) {
    const auto w = grid.week_of(e.at);
    if (!weeks.empty() && weeks.back().week == w) {
      weeks.back().count += e.multiplicity;
    } else {
      weeks.push_back({w, e.multiplicity});
    }
  }

  std::size_t peak = 0;
  for (std::size_t i = 1; i < weeks.size(); ++i) {
    if (weeks[i].count > weeks[peak].count) peak = i;
  }
  const std::int64_t max_count = weeks[peak].count;
  // count >= max/10 in exact integer arithmetic; absent weeks count as zero.
  const auto strong = [&](std::size_t i) { return weeks[i].count * 10 >= max_count; };

  std::size_t lo = peak;
  while (lo > 0 && weeks[lo - 1].week + 1 == weeks[lo].week && strong(lo - 1)) --lo;
  std::size_t hi = peak;
  while (hi + 1 < weeks.size() && weeks[hi + 1].week == weeks[hi].week + 1 && strong(hi + 1)) ++hi;

  const std::int64_t n_weeks = weeks[hi].week - weeks[lo].week + 1;
  return FamePeriod{t.name,
                    Method::Spike,
                    midnight(grid.week_start(weeks[lo].week)),
                    midnight(grid.week_start(weeks[hi].week + 1)),
                    grid.week_start(weeks[peak].week),
                    static_cast<double>(7 * n_weeks)};
}

FamePeriod continuity_period(const Timeline& t) {
  assert(!t.empty());
  const auto& ev = t.events;
  std::size_t best_lo = 0, best_hi = 0;
  std::size_t lo = 0;
  const auto consider = [&](std::size_t hi) {
    if (ev[hi].at - ev[lo].at > ev[best_hi].at - ev[best_lo].at) {
      best_lo = lo;
      best_hi = hi;
    }
  };
  for (std::size_t i = 1; i < ev.size(); ++i) {
    if ((ev[i].at - ev[i - 1].at).count() > kMaxContinuityGapSeconds) {
      consider(i - 1);
      lo = i;
    }
  }
  consider(ev.size() - 1);

  const Timestamp start = ev[best_lo].at;
  const Timestamp end = ev[best_hi].at;
  const double duration = days_between(start, end);
  const auto half = static_cast<std::int64_t>(std::floor(duration / 2.0));
  return FamePeriod{t.name, Method::Continuity, start, end, day_of(start) + chr::days{half}, duration};
}

std::vector<FamePeriod> detect_periods(std::span<const Timeline> timelines, Method method,
                                       const WeekGrid& grid, Execution exec) {
  std::vector<const Timeline*> live;
  live.reserve(timelines.size());
  for (const auto& t : timelines) {
    if (!t.empty()) live.push_back(&t);
  }
  std::vector<FamePeriod> out(live.size());
  const auto n = static_cast<std::int64_t>(live.size());
  const auto one = [&](std::int64_t i) {
    out[i] = method == Method::Spike ? spike_period(*live[i], grid) : continuity_period(*live[i]);
  };
  if (exec == Execution::Parallel) {
#pragma omp parallel for schedule(dynamic, 64)
    for (std::int64_t i = 0; i < n; ++i) one(i);
  } else {
    for (std::int64_t i = 0; i < n; ++i) one(i);
  }
  return out;
}

std::vector<FamePeriod> period_filter(std::span<const FamePeriod> periods,
                                      const AnalysisWindow& window, double min_duration) {
  const Timestamp limit = midnight(window.end());
  std::vector<FamePeriod> out;
  for (const auto& p : periods) {
    if (p.duration_days >= min_duration && p.end < limit) out.push_back(p);
  }
  return out;
}

double persisted_duration(double days) { return std::round(days * 1000.0) / 1000.0; }

std::string format_duration(double days) {
  const double r = persisted_duration(days);
  if (r == std::floor(r) && std::abs(r) < 1e15) return fmt::format("{}", static_cast<std::int64_t>(r));
  return fmt::format("{:.3f}", r);
}

void write_periods(std::ostream& out, std::span<const FamePeriod> periods) {
  out << "name,method,start,end,peak_date,duration_days\n";
  for (const auto& p : periods) {
    out << csv::escape(p.name) << ',' << to_string(p.method) << ',' << format_timestamp(p.start)
        << ',' << format_timestamp(p.end) << ',' << format_date(p.peak_date) << ','
        << format_duration(p.duration_days) << '\n';
  }
}

std::vector<FamePeriod> read_periods(std::istream& in) {
  std::vector<FamePeriod> out;
  std::string line;
  std::int64_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (lineno == 1 || line.empty()) continue;
    const auto f = csv::split(line);
    const auto bad = [&] { return DataError("periods CSV line " + std::to_string(lineno)); };
    if (f.size() != 6) throw bad();
    const auto start = parse_timestamp(f[2]);
    const auto end = parse_timestamp(f[3]);
    const auto peak = parse_date(f[4]);
    double duration = 0.0;
    const auto [ptr, ec] = std::from_chars(f[5].data(), f[5].data() + f[5].size(), duration);
    if (!start || !end || !peak || ec != std::errc{} || ptr != f[5].data() + f[5].size()) throw bad();
    out.push_back({f[0], parse_method(f[1]), start->at, end->at, *peak, duration});
  }
  return out;
}

}  // namespace fame
