#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>
#include <random>
#include <sstream>

#include "fame/timeline.hpp"
#include "test_util.hpp"

using namespace fame;
using fame::testing::day;

TEST(Timeline, BuildSumsMultiplicities) {
  const std::vector<Mention> mentions = {{"A", day(1), 2}, {"A", day(1), 1}, {"A", day(2), 1}};
  const auto tl = build_timelines(mentions);
  ASSERT_EQ(tl.size(), 1u);
  EXPECT_EQ(tl[0].name, "A");
  EXPECT_EQ(tl[0].events, (std::vector<Event>{{day(1), 3}, {day(2), 1}}));
  EXPECT_EQ(tl[0].total(), 4);
}

TEST(Timeline, DisjointNamesGiveDisjointTimelines) {
  const std::vector<Mention> mentions = {{"B", day(3), 1}, {"A", day(1), 1}};
  const auto tl = build_timelines(mentions);
  ASSERT_EQ(tl.size(), 2u);
  EXPECT_EQ(tl[0], (Timeline{"A", {{day(1), 1}}}));
  EXPECT_EQ(tl[1], (Timeline{"B", {{day(3), 1}}}));
}

TEST(Timeline, BasicFilterBoundary) {
  const std::vector<Timeline> tl = {
      {"nine", {{day(0), 4}, {day(1), 5}}},
      {"ten", {{day(0), 10}}},
      {"one", {{day(0), 1}}},
  };
  const auto kept = basic_name_filter(tl, 10);
  ASSERT_EQ(kept.size(), 1u);
  EXPECT_EQ(kept[0].name, "ten");
  EXPECT_EQ(basic_name_filter(tl, 1), tl);
}

TEST(Timeline, YearlyCounts) {
  const std::vector<Timeline> tl = {
      {"A", {{day(0), 2}, {day(10), 3}, {day(400), 1}}},
  };
  EXPECT_EQ(yearly_counts(tl), (std::vector<YearlyCount>{{"A", 1900, 5}, {"A", 1901, 1}}));
}

TEST(Timeline, TopKRanksWithLexicographicTieBreak) {
  const std::vector<YearlyCount> counts = {{"A", 1900, 5}, {"B", 1900, 3}, {"C", 1900, 1}};
  EXPECT_EQ(top_k_by_year(counts, 2), (NameSet{"A", "B"}));
  EXPECT_EQ(top_k_by_year(counts, 10), (NameSet{"A", "B", "C"}));

  const std::vector<YearlyCount> ties = {{"Zed", 1900, 4}, {"Amy", 1900, 4}, {"Bob", 1900, 4}};
  EXPECT_EQ(top_k_by_year(ties, 2), (NameSet{"Amy", "Bob"}));
}

TEST(Timeline, TopKIsAUnionOverYears) {
  // "Late" is only in the top-1 of 1900 but has most mentions in 1901.
  const std::vector<YearlyCount> counts = {{"Late", 1900, 9}, {"Other", 1900, 2},
                                           {"Late", 1901, 50}, {"Big", 1901, 60}};
  EXPECT_EQ(top_k_by_year(counts, 1), (NameSet{"Late", "Big"}));
}

TEST(Timeline, TopFractionUsesCeiling) {
  std::vector<YearlyCount> counts;
  for (int i = 0; i < 2500; ++i) counts.push_back({"n" + std::to_string(10000 + i), 1900, 10000 - i});
  for (int i = 0; i < 1000; ++i) counts.push_back({"m" + std::to_string(10000 + i), 1901, 10000 - i});
  const auto s = top_frac_by_year(counts, {1, 1000});
  EXPECT_EQ(s, (NameSet{"n10000", "n10001", "n10002", "m10000"}));
  EXPECT_TRUE(top_frac_by_year(std::vector<YearlyCount>{}, {1, 1000}).empty());
}

TEST(Timeline, TsvRoundTrip) {
  const std::vector<Timeline> tl = {
      {"Zed Q", {{day(0), 1}, {day(0, 3600), 2}}},
      {"Amy B", {{day(5), 7}}},
  };
  std::ostringstream out;
  write_timelines(out, tl);
  EXPECT_EQ(out.str(),
            "Amy B\t1900-01-06\t7\n"
            "Zed Q\t1900-01-01\t1\n"
            "Zed Q\t1900-01-01T01:00:00Z\t2\n");
  std::istringstream in(out.str());
  const auto back = read_timelines(in);
  ASSERT_EQ(back.size(), 2u);
  EXPECT_EQ(back[0], tl[1]);
  EXPECT_EQ(back[1], tl[0]);
}

namespace {

std::vector<Mention> random_mentions(std::mt19937_64& rng, int n) {
  std::uniform_int_distribution<int> name(0, 30), d(0, 2000), c(1, 5);
  std::vector<Mention> out;
  for (int i = 0; i < n; ++i) out.push_back({"N" + std::to_string(name(rng)), day(d(rng)), c(rng)});
  return out;
}

std::vector<YearlyCount> random_counts(std::mt19937_64& rng, int names, int years) {
  std::uniform_int_distribution<int> c(1, 40);
  std::bernoulli_distribution present(0.7);
  std::vector<YearlyCount> out;
  for (int y = 0; y < years; ++y) {
    for (int i = 0; i < names; ++i) {
      if (present(rng)) out.push_back({"N" + std::to_string(i), 1900 + y, c(rng)});
    }
  }
  return out;
}

}  // namespace

TEST(TimelineProperty, BuildIsOrderIndependentAndConservesTotals) {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 50; ++trial) {
    auto mentions = random_mentions(rng, 300);
    const auto base = build_timelines(mentions);
    std::int64_t in_total = 0;
    for (const auto& m : mentions) in_total += m.count;
    std::int64_t out_total = 0;
    for (const auto& t : base) {
      out_total += t.total();
      EXPECT_TRUE(std::is_sorted(t.events.begin(), t.events.end(),
                                 [](const Event& a, const Event& b) { return a.at < b.at; }));
    }
    EXPECT_EQ(in_total, out_total);

    std::shuffle(mentions.begin(), mentions.end(), rng);
    EXPECT_EQ(build_timelines(mentions), base);

    // Merging builders over an arbitrary partition equals one builder.
    TimelineBuilder left, right;
    for (std::size_t i = 0; i < mentions.size(); ++i) (i % 3 == 0 ? left : right).add(mentions[i]);
    right.merge(std::move(left));
    EXPECT_EQ(std::move(right).build(), base);
  }
}

TEST(TimelineProperty, TopKSizeAndFullFraction) {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 30; ++trial) {
    const auto counts = random_counts(rng, 40, 4);
    for (const std::int64_t k : {1, 5, 20, 100}) {
      for (int y = 1900; y < 1904; ++y) {
        std::vector<YearlyCount> year;
        for (const auto& c : counts) {
          if (c.year == y) year.push_back(c);
        }
        const auto s = top_k_by_year(year, k);
        EXPECT_EQ(static_cast<std::int64_t>(s.size()), std::min<std::int64_t>(k, year.size()));
      }
    }
    NameSet all;
    for (const auto& c : counts) all.insert(c.name);
    EXPECT_EQ(top_frac_by_year(counts, {1, 1}), all);
  }
}

TEST(TimelineProperty, FiltersAreMonotone) {
  std::mt19937_64 rng(29);
  for (int trial = 0; trial < 30; ++trial) {
    auto counts = random_counts(rng, 30, 3);
    const auto k_set = top_k_by_year(counts, 5);
    const auto f_set = top_frac_by_year(counts, {1, 10});

    // Adding another year's counts keeps every earlier selection.
    auto more = counts;
    const auto extra = random_counts(rng, 60, 1);
    for (auto c : extra) {
      c.year = 1950;
      more.push_back(c);
    }
    const auto k_more = top_k_by_year(more, 5);
    const auto f_more = top_frac_by_year(more, {1, 10});
    EXPECT_TRUE(std::includes(k_more.begin(), k_more.end(), k_set.begin(), k_set.end()));
    EXPECT_TRUE(std::includes(f_more.begin(), f_more.end(), f_set.begin(), f_set.end()));

    // A larger k keeps the smaller k's selection.
    const auto k_big = top_k_by_year(counts, 8);
    EXPECT_TRUE(std::includes(k_big.begin(), k_big.end(), k_set.begin(), k_set.end()));

    // More mentions of a name never drops it from the basic filter.
    auto mentions = random_mentions(rng, 200);
    const auto before = basic_name_filter(build_timelines(mentions), 10);
    const auto added = random_mentions(rng, 100);
    mentions.insert(mentions.end(), added.begin(), added.end());
    const auto after = basic_name_filter(build_timelines(mentions), 10);
    NameSet after_names;
    for (const auto& t : after) after_names.insert(t.name);
    for (const auto& t : before) EXPECT_TRUE(after_names.contains(t.name));
  }
}
