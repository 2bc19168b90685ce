#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string_view>
#include <vector>

#include "fame/corpus_io.hpp"
#include "fame/parallel.hpp"
#include "fame/time.hpp"

namespace fame {

struct MonthVolume {
  YearMonth month;
  std::int64_t n = 0;

  friend bool operator==(const MonthVolume&, const MonthVolume&) = default;
};

enum class UnderfullPolicy { DropMonth, KeepAll, Fail };

struct SamplerConfig {
  std::int64_t n_min = 0;  // required, >= 1
  std::uint64_t seed = 0;
  UnderfullPolicy underfull = UnderfullPolicy::DropMonth;
};

struct SamplingRow {
  YearMonth month;
  std::int64_t n = 0;
  std::int64_t kept = 0;

  friend bool operator==(const SamplingRow&, const SamplingRow&) = default;
};

struct SampleResult {
  std::vector<Document> kept;      // input order preserved
  std::vector<SamplingRow> report;  // ascending by month
};

/// Document count per month present, ascending by month.
[[nodiscard]] std::vector<MonthVolume> month_volumes(std::span<const Document> docs);

/// Inclusion probability min(1, n_min / n_t) for a month that is not underfull.
[[nodiscard]] double inclusion_probability(std::int64_t n_t, std::int64_t n_min);

/// The per-document coin: a pure function of (seed, id), independent of order.
[[nodiscard]] bool coin_keeps(std::uint64_t seed, std::string_view id, double probability);

/// Per-month Bernoulli subsampling towards n_min documents per month.
/// Throws ConfigError for n_min < 1 and DataError for a month missing from
/// `volumes` or, under UnderfullPolicy::Fail, the first underfull month.
[[nodiscard]] SampleResult sample_uniform(std::span<const Document> docs,
                                          std::span<const MonthVolume> volumes,
                                          const SamplerConfig& cfg,
                                          Execution exec = Execution::Parallel);

/// CSV with header `month,n_t,kept`.
void write_sampling_report(std::ostream& out, std::span<const SamplingRow> rows);

[[nodiscard]] UnderfullPolicy parse_underfull_policy(std::string_view s);

}  // namespace fame
