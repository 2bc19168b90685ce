#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <set>
#include <sstream>

#include "fame/errors.hpp"
#include "fame/sampler.hpp"
#include "test_util.hpp"

using namespace fame;
using fame::testing::ymd;

namespace {

Document doc_on(const std::string& id, Date d) { return {id, midnight(d), false, MentionList{}}; }

std::vector<Document> month_of_docs(int year, unsigned month, int n, const std::string& prefix) {
  std::vector<Document> out;
  for (int i = 0; i < n; ++i) {
    out.push_back(doc_on(prefix + std::to_string(i), ymd(year, month, 1 + static_cast<unsigned>(i % 28))));
  }
  return out;
}

std::set<std::string> ids(const std::vector<Document>& docs) {
  std::set<std::string> s;
  for (const auto& d : docs) s.insert(d.id);
  return s;
}

}  // namespace

TEST(Sampler, MonthVolumesCountsPerMonth) {
  std::vector<Document> docs = {doc_on("a", ymd(1900, 1, 3)), doc_on("b", ymd(1900, 2, 1)),
                                doc_on("c", ymd(1900, 1, 31)), doc_on("d", ymd(1900, 1, 1))};
  EXPECT_EQ(month_volumes(docs), (std::vector<MonthVolume>{{{1900, 1}, 3}, {{1900, 2}, 1}}));
  EXPECT_TRUE(month_volumes(std::vector<Document>{}).empty());
  EXPECT_EQ(month_volumes(month_of_docs(1950, 6, 10, "x")).size(), 1u);
}

TEST(Sampler, ProbabilityIsCappedAtOne) {
  EXPECT_DOUBLE_EQ(inclusion_probability(100, 100), 1.0);
  EXPECT_DOUBLE_EQ(inclusion_probability(200, 100), 0.5);
  EXPECT_DOUBLE_EQ(inclusion_probability(50, 100), 1.0);
}

TEST(Sampler, MonthAtNminKeepsEverything) {
  const auto docs = month_of_docs(1900, 1, 250, "d");
  const auto vols = month_volumes(docs);
  const auto r = sample_uniform(docs, vols, {250, 1, UnderfullPolicy::DropMonth});
  EXPECT_EQ(r.kept, docs);
  EXPECT_EQ(r.report, (std::vector<SamplingRow>{{{1900, 1}, 250, 250}}));
}

TEST(Sampler, DoubleVolumeIsBinomialHalf) {
  const auto docs = month_of_docs(1900, 1, 10000, "d");
  const auto vols = month_volumes(docs);
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const auto r = sample_uniform(docs, vols, {5000, seed, UnderfullPolicy::DropMonth});
    const double sigma = std::sqrt(10000 * 0.25);
    EXPECT_LE(std::abs(static_cast<double>(r.kept.size()) - 5000.0), 3 * sigma) << "seed " << seed;
  }
}

TEST(Sampler, UnderfullPolicies) {
  auto docs = month_of_docs(1900, 1, 20, "a");
  const auto thin = month_of_docs(1900, 2, 5, "b");
  docs.insert(docs.end(), thin.begin(), thin.end());
  const auto vols = month_volumes(docs);

  const auto dropped = sample_uniform(docs, vols, {10, 3, UnderfullPolicy::DropMonth});
  for (const auto& d : dropped.kept) EXPECT_EQ(month_of(d.timestamp), (YearMonth{1900, 1}));
  EXPECT_EQ(dropped.report.back(), (SamplingRow{{1900, 2}, 5, 0}));

  const auto kept = sample_uniform(docs, vols, {10, 3, UnderfullPolicy::KeepAll});
  EXPECT_EQ(kept.report.back(), (SamplingRow{{1900, 2}, 5, 5}));

  try {
    (void)sample_uniform(docs, vols, {10, 3, UnderfullPolicy::Fail});
    FAIL() << "expected DataError";
  } catch (const DataError& e) {
    EXPECT_NE(std::string(e.what()).find("1900-02"), std::string::npos);
  }
}

TEST(Sampler, Errors) {
  const auto docs = month_of_docs(1900, 1, 3, "a");
  EXPECT_THROW((void)sample_uniform(docs, month_volumes(docs), {0, 1, UnderfullPolicy::DropMonth}),
               ConfigError);
  const std::vector<MonthVolume> other = {{{1901, 1}, 3}};
  EXPECT_THROW((void)sample_uniform(docs, other, {1, 1, UnderfullPolicy::DropMonth}), DataError);
  EXPECT_THROW((void)parse_underfull_policy("sometimes"), ConfigError);
  EXPECT_EQ(parse_underfull_policy("keep-all"), UnderfullPolicy::KeepAll);
}

TEST(Sampler, ReportCsv) {
  std::ostringstream out;
  const std::vector<SamplingRow> rows = {{{1900, 1}, 20, 10}, {{1900, 2}, 5, 0}};
  write_sampling_report(out, rows);
  EXPECT_EQ(out.str(), "month,n_t,kept\n1900-01,20,10\n1900-02,5,0\n");
}

TEST(SamplerProperty, KeptCountsAreBinomialPerMonth) {
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<int> volume(100, 3000);
  std::vector<Document> docs;
  for (unsigned m = 1; m <= 12; ++m) {
    const auto month = month_of_docs(1930, m, volume(rng), "m" + std::to_string(m) + "-");
    docs.insert(docs.end(), month.begin(), month.end());
  }
  const auto vols = month_volumes(docs);
  const std::int64_t n_min = 100;
  const auto r = sample_uniform(docs, vols, {n_min, 77, UnderfullPolicy::DropMonth});
  for (const auto& row : r.report) {
    const double p = inclusion_probability(row.n, n_min);
    const double mean = static_cast<double>(row.n) * p;
    const double sigma = std::sqrt(static_cast<double>(row.n) * p * (1 - p));
    EXPECT_LE(std::abs(static_cast<double>(row.kept) - mean), 3 * sigma + 1e-9) << row.month.str();
  }
  // Kept set is a subset of the input.
  const auto all = ids(docs);
  for (const auto& d : r.kept) EXPECT_TRUE(all.contains(d.id));
}

TEST(SamplerProperty, DeterministicAndOrderIndependent) {
  std::vector<Document> docs;
  for (unsigned m = 1; m <= 6; ++m) {
    const auto month = month_of_docs(1960, m, 400 * static_cast<int>(m), "p" + std::to_string(m) + "-");
    docs.insert(docs.end(), month.begin(), month.end());
  }
  const auto vols = month_volumes(docs);
  const SamplerConfig cfg{300, 2024, UnderfullPolicy::DropMonth};
  const auto a = sample_uniform(docs, vols, cfg);
  const auto b = sample_uniform(docs, vols, cfg, Execution::Serial);
  EXPECT_EQ(a.kept, b.kept);
  EXPECT_EQ(a.report, b.report);

  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 5; ++trial) {
    auto shuffled = docs;
    std::shuffle(shuffled.begin(), shuffled.end(), rng);
    const auto c = sample_uniform(shuffled, month_volumes(shuffled), cfg);
    EXPECT_EQ(ids(c.kept), ids(a.kept));
    EXPECT_EQ(c.report, a.report);
  }
}

TEST(SamplerProperty, ConstantVolumeAtNminIsIdentity) {
  std::vector<Document> docs;
  for (unsigned m = 1; m <= 12; ++m) {
    const auto month = month_of_docs(1970, m, 150, "c" + std::to_string(m) + "-");
    docs.insert(docs.end(), month.begin(), month.end());
  }
  const auto r = sample_uniform(docs, month_volumes(docs), {150, 9, UnderfullPolicy::DropMonth});
  EXPECT_EQ(r.kept, docs);
}
