#include <gtest/gtest.h>

#include <algorithm>
#include <map>
#include <random>
#include <sstream>

#include "fame/errors.hpp"
#include "fame/peaks.hpp"
#include "fame/report.hpp"
#include "test_util.hpp"

using namespace fame;
using fame::testing::base_monday;
using fame::testing::day;
using fame::testing::timeline_of;
using fame::testing::ymd;

namespace {

const WeekGrid kGrid{base_monday()};

Timeline weekly_counts(const std::vector<std::int64_t>& counts) {
  std::vector<std::pair<std::int64_t, std::int64_t>> ev;
  for (std::size_t w = 0; w < counts.size(); ++w) {
    if (counts[w] > 0) ev.push_back({static_cast<std::int64_t>(7 * w + w % 7), counts[w]});
  }
  return timeline_of("X", ev);
}

}  // namespace

TEST(Spike, ThresholdRunAroundPeak) {
  const auto p = spike_period(weekly_counts({10, 2, 1, 0}), kGrid);
  EXPECT_EQ(p.duration_days, 21.0);
  EXPECT_EQ(p.start, day(0));
  EXPECT_EQ(p.end, day(21));
  EXPECT_EQ(p.peak_date, base_monday());
  EXPECT_EQ(p.method, Method::Spike);
}

TEST(Spike, SingleMentionIsOneWeek) {
  const auto p = spike_period(timeline_of("X", {{3, 1}}), kGrid);
  EXPECT_EQ(p.duration_days, 7.0);
  EXPECT_EQ(p.start, day(0));
  EXPECT_EQ(p.end, day(7));
  EXPECT_EQ(p.peak_date, base_monday());
}

TEST(Spike, EarliestMaximumIsThePeak) {
  const auto p = spike_period(weekly_counts({3, 5, 5}), kGrid);
  EXPECT_EQ(p.duration_days, 21.0);
  EXPECT_EQ(p.peak_date, base_monday() + std::chrono::days{7});
  EXPECT_EQ(p.start, day(0));
  EXPECT_EQ(p.end, day(21));
}

TEST(Spike, EmptyWeekStopsTheRun) {
  const auto p = spike_period(weekly_counts({1, 0, 5, 1, 0, 9, 1}), kGrid);
  EXPECT_EQ(p.peak_date, base_monday() + std::chrono::days{35});
  EXPECT_EQ(p.duration_days, 14.0);
  EXPECT_EQ(p.start, day(35));
}

TEST(Spike, ThresholdIsRealValued) {
  // Max 15: a week of 1 is below 1.5, a week of 2 is above it.
  EXPECT_EQ(spike_period(weekly_counts({1, 15, 2}), kGrid).duration_days, 14.0);
  // Max 10: a week of exactly 1 is at the threshold and stays in.
  EXPECT_EQ(spike_period(weekly_counts({1, 10, 1}), kGrid).duration_days, 21.0);
}

TEST(Continuity, LongestGapBoundedRun) {
  const auto p = continuity_period(timeline_of("X", {{0, 1}, {5, 1}, {11, 1}, {30, 1}}));
  EXPECT_EQ(p.duration_days, 11.0);
  EXPECT_EQ(p.start, day(0));
  EXPECT_EQ(p.end, day(11));
  EXPECT_EQ(p.peak_date, base_monday() + std::chrono::days{5});
}

TEST(Continuity, MondayToWednesdayIsTwoDays) {
  // 1900-01-01 is a Monday.
  const auto p = continuity_period(timeline_of("X", {{0, 1}, {2, 1}}));
  EXPECT_EQ(p.duration_days, 2.0);
  EXPECT_EQ(p.peak_date, base_monday() + std::chrono::days{1});
}

TEST(Continuity, EightDayGapSplitsRuns) {
  const auto p = continuity_period(timeline_of("X", {{0, 1}, {8, 1}}));
  EXPECT_EQ(p.duration_days, 0.0);
  EXPECT_EQ(p.start, day(0));
  EXPECT_EQ(p.end, day(0));
  // Seven days is still continuous.
  EXPECT_EQ(continuity_period(timeline_of("X", {{0, 1}, {7, 1}})).duration_days, 7.0);
}

TEST(Continuity, TiesGoToTheEarliestRun) {
  const auto p = continuity_period(timeline_of("X", {{0, 1}, {3, 1}, {20, 1}, {23, 1}}));
  EXPECT_EQ(p.start, day(0));
  EXPECT_EQ(p.duration_days, 3.0);
}

TEST(Continuity, SubDayTimestampsGiveFractionalDurations) {
  Timeline t{"X", {{day(0, 6 * 3600), 1}, {day(3, 18 * 3600), 1}}};
  const auto p = continuity_period(t);
  EXPECT_DOUBLE_EQ(p.duration_days, 3.5);
  EXPECT_EQ(p.peak_date, base_monday() + std::chrono::days{1});
  // Seven days and one second is a break.
  Timeline u{"Y", {{day(0), 1}, {day(7, 1), 1}}};
  EXPECT_EQ(continuity_period(u).duration_days, 0.0);
}

TEST(Peaks, WeekGridStartsOnMonday) {
  // 1895-01-01 was a Tuesday.
  EXPECT_EQ(WeekGrid::for_window(AnalysisWindow({1895, 1}, {2011, 1})).origin, ymd(1894, 12, 31));
  EXPECT_EQ(WeekGrid::for_window(AnalysisWindow({1900, 1}, {1901, 1})).origin, ymd(1900, 1, 1));
  EXPECT_EQ(kGrid.week_of(day(-1)), -1);
  EXPECT_EQ(kGrid.week_of(day(6, 86399)), 0);
  EXPECT_EQ(kGrid.week_of(day(7)), 1);
}

TEST(Peaks, PeriodFilter) {
  const AnalysisWindow w({1900, 1}, {1901, 1});
  const auto end_of_window = midnight(ymd(1901, 1, 1));
  const std::vector<FamePeriod> periods = {
      {"at-end", Method::Spike, end_of_window - std::chrono::days{7}, end_of_window, ymd(1900, 12, 25), 7},
      {"one-day", Method::Continuity, day(10), day(11), ymd(1900, 1, 11), 1},
      {"two-days", Method::Continuity, day(10), day(12), ymd(1900, 1, 12), 2},
  };
  const auto kept = period_filter(periods, w, 2.0);
  ASSERT_EQ(kept.size(), 1u);
  EXPECT_EQ(kept[0].name, "two-days");
}

TEST(Peaks, CsvRoundTrip) {
  const std::vector<FamePeriod> periods = {
      {"Ada, \"the\" Countess", Method::Continuity, day(0, 3600), day(3, 7200), ymd(1900, 1, 2),
       days_between(day(0, 3600), day(3, 7200))},
      {"B", Method::Spike, day(7), day(21), ymd(1900, 1, 8), 14},
  };
  std::ostringstream out;
  write_periods(out, periods);
  EXPECT_EQ(out.str(),
            "name,method,start,end,peak_date,duration_days\n"
            "\"Ada, \"\"the\"\" Countess\",continuity,1900-01-01T01:00:00Z,1900-01-04T02:00:00Z,"
            "1900-01-02,3.042\n"
            "B,spike,1900-01-08,1900-01-22,1900-01-08,14\n");
  std::istringstream in(out.str());
  const auto back = read_periods(in);
  ASSERT_EQ(back.size(), 2u);
  EXPECT_EQ(back[0].name, periods[0].name);
  EXPECT_EQ(back[0].start, periods[0].start);
  EXPECT_DOUBLE_EQ(back[0].duration_days, 3.042);
  EXPECT_EQ(back[1], periods[1]);
}

TEST(Peaks, FixturesDisagreeAsDocumented) {
  const AnalysisWindow w({1895, 1}, {2011, 1});
  const auto grid = WeekGrid::for_window(w);

  const auto monroe = fixture_timeline(FixtureKind::MonroeLike);
  const auto ms = spike_period(monroe, grid);
  const auto mc = continuity_period(monroe);
  EXPECT_GT(mc.duration_days, 5 * ms.duration_days);
  EXPECT_GT(ms.start, mc.end);  // spike is the terminal burst

  const auto astor = fixture_timeline(FixtureKind::AstorLike);
  const auto as = spike_period(astor, grid);
  const auto ac = continuity_period(astor);
  EXPECT_TRUE(as.end <= ac.start || ac.end < as.start);
  EXPECT_LT(as.start, ac.start);
  EXPECT_GT(ac.duration_days, as.duration_days);

  for (const auto& t : {monroe, astor}) {
    EXPECT_GE(t.total(), 1);
    for (const auto& e : t.events) EXPECT_TRUE(w.contains(e.at));
    EXPECT_TRUE(std::is_sorted(t.events.begin(), t.events.end(),
                               [](const Event& a, const Event& b) { return a.at < b.at; }));
  }
}

namespace {

Timeline random_timeline(std::mt19937_64& rng, bool sub_day) {
  std::uniform_int_distribution<int> n_events(1, 60), mult(1, 12), sec(0, 86399);
  std::uniform_int_distribution<int> span_pick(0, 2);
  const int spans[] = {30, 200, 1000};
  std::uniform_int_distribution<int> when(0, spans[span_pick(rng)]);
  std::bernoulli_distribution timed(0.4);
  Timeline t{"R", {}};
  for (int i = n_events(rng); i > 0; --i) {
    t.events.push_back({day(when(rng), sub_day && timed(rng) ? sec(rng) : 0), mult(rng)});
  }
  normalize(t);
  return t;
}

Timeline shifted(const Timeline& t, std::int64_t days) {
  Timeline s = t;
  for (auto& e : s.events) e.at += std::chrono::days{days};
  return s;
}

}  // namespace

TEST(PeaksProperty, SpikeRunContainsGlobalMaximum) {
  std::mt19937_64 rng(41);
  for (int trial = 0; trial < 500; ++trial) {
    const auto t = random_timeline(rng, true);
    const auto p = spike_period(t, kGrid);
    std::map<std::int64_t, std::int64_t> weeks;
    for (const auto& e : t.events) weeks[kGrid.week_of(e.at)] += e.multiplicity;
    std::int64_t max = 0, inside_max = 0;
    for (const auto& [w, c] : weeks) {
      max = std::max(max, c);
      const auto ws = midnight(kGrid.week_start(w));
      if (ws >= p.start && ws < p.end) inside_max = std::max(inside_max, c);
    }
    EXPECT_EQ(inside_max, max);
    EXPECT_EQ(static_cast<std::int64_t>(p.duration_days) % 7, 0);
    EXPECT_GT(p.duration_days, 0.0);
    EXPECT_LE(p.start, midnight(p.peak_date));
    EXPECT_LT(midnight(p.peak_date), p.end);
  }
}

TEST(PeaksProperty, ContinuityGapStructure) {
  std::mt19937_64 rng(43);
  for (int trial = 0; trial < 500; ++trial) {
    const auto t = random_timeline(rng, true);
    const auto p = continuity_period(t);
    const auto& ev = t.events;
    const auto first = std::find_if(ev.begin(), ev.end(), [&](const Event& e) { return e.at == p.start; });
    const auto last = std::find_if(ev.begin(), ev.end(), [&](const Event& e) { return e.at == p.end; });
    ASSERT_NE(first, ev.end());
    ASSERT_NE(last, ev.end());
    for (auto it = first; it != last; ++it) {
      EXPECT_LE((std::next(it)->at - it->at).count(), kMaxContinuityGapSeconds);
    }
    if (first != ev.begin()) EXPECT_GT((first->at - std::prev(first)->at).count(), kMaxContinuityGapSeconds);
    if (std::next(last) != ev.end()) {
      EXPECT_GT((std::next(last)->at - last->at).count(), kMaxContinuityGapSeconds);
    }
    EXPECT_DOUBLE_EQ(p.duration_days, days_between(p.start, p.end));
    EXPECT_LE(day_of(p.start), p.peak_date);
    EXPECT_LE(p.peak_date, day_of(p.end));
  }
}

TEST(PeaksProperty, TranslationEquivariance) {
  std::mt19937_64 rng(47);
  std::uniform_int_distribution<int> shift(-500, 500);
  for (int trial = 0; trial < 300; ++trial) {
    const auto t = random_timeline(rng, true);
    const int k = shift(rng);
    const auto a = continuity_period(t);
    const auto b = continuity_period(shifted(t, k));
    EXPECT_EQ(b.start, a.start + std::chrono::days{k});
    EXPECT_EQ(b.end, a.end + std::chrono::days{k});
    EXPECT_EQ(b.peak_date, a.peak_date + std::chrono::days{k});
    EXPECT_EQ(b.duration_days, a.duration_days);

    const int k7 = 7 * (k / 7);
    const auto s = spike_period(t, kGrid);
    const auto u = spike_period(shifted(t, k7), kGrid);
    EXPECT_EQ(u.start, s.start + std::chrono::days{k7});
    EXPECT_EQ(u.end, s.end + std::chrono::days{k7});
    EXPECT_EQ(u.peak_date, s.peak_date + std::chrono::days{k7});
    EXPECT_EQ(u.duration_days, s.duration_days);
  }
}

TEST(PeaksProperty, AddingAMentionInsideTheRunNeverShortensIt) {
  std::mt19937_64 rng(53);
  for (int trial = 0; trial < 300; ++trial) {
    auto t = random_timeline(rng, true);
    const auto before = continuity_period(t);
    const auto span = (before.end - before.start).count();
    std::uniform_int_distribution<std::int64_t> offset(0, span);
    t.events.push_back({before.start + std::chrono::seconds{offset(rng)}, 1});
    normalize(t);
    EXPECT_GE(continuity_period(t).duration_days, before.duration_days);
  }
}

TEST(PeaksProperty, SerialAndParallelDetectionAgree) {
  std::mt19937_64 rng(59);
  std::vector<Timeline> tl;
  for (int i = 0; i < 400; ++i) {
    auto t = random_timeline(rng, true);
    t.name = "N" + std::to_string(i);
    tl.push_back(std::move(t));
  }
  tl.push_back(Timeline{"empty", {}});
  for (const auto m : {Method::Spike, Method::Continuity}) {
    const auto par = detect_periods(tl, m, kGrid, Execution::Parallel);
    const auto ser = detect_periods(tl, m, kGrid, Execution::Serial);
    EXPECT_EQ(par, ser);
    EXPECT_EQ(par.size(), 400u);
  }
}
