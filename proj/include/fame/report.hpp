#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "fame/peaks.hpp"
#include "fame/stats.hpp"
#include "fame/timeline.hpp"

namespace fame {

enum class NameFilter { All, TopK, TopFraction };

/// File-name token: "all", "top1000", "top0.1pct".
[[nodiscard]] std::string_view to_string(NameFilter f);
/// Table label: "all", "top 1000", "top 0.1%".
[[nodiscard]] std::string_view display_name(NameFilter f);
[[nodiscard]] NameFilter parse_name_filter(std::string_view s);

struct StatsOptions {
  BootstrapConfig bootstrap;
  double tail_quantile = 0.8;
};

/// Quantiles, tail fit and (optionally) bootstrap intervals of one cohort.
struct CohortSummary {
  Cohort cohort;
  double p50 = 0.0;
  double p90 = 0.0;
  double p99 = 0.0;
  std::optional<PowerLawFit> fit;
  std::optional<StatsErrorCode> fit_error;
  bool bootstrapped = false;
  BootstrapOutcome b50, b90, b99, balpha;
};

/// Per-cohort statistics. The bootstrap seed of each cohort is derived from
/// the base seed, `stream_label` and the cohort label, so a cohort's
/// intervals do not depend on which other cohorts exist.
[[nodiscard]] std::vector<CohortSummary> summarize_cohorts(std::span<const FamePeriod> periods,
                                                           CohortWidth width,
                                                           const StatsOptions& opts,
                                                           bool with_bootstrap,
                                                           std::string_view stream_label);

[[nodiscard]] std::uint64_t cohort_seed(std::uint64_t base, std::string_view stream_label,
                                        const Cohort& cohort);

/// Header `bucket_start,width,n,p50,p90,p99` plus
/// `p50_lo,p50_hi,p90_lo,p90_hi,p99_lo,p99_hi` when intervals are present.
void write_quantile_series(std::ostream& out, std::span<const CohortSummary> rows);

/// `# reference_slope=<alpha+1>` (or `NA`), then `x,y` rows.
void write_curve(std::ostream& out, const CohortSummary& row);

/// Pretty-printed JSON array, one object per cohort:
/// {cohort, n, alpha, d_min, n_tail, lo, hi, reps, seed}.
[[nodiscard]] std::string fit_json(std::span<const CohortSummary> rows);

struct SummaryRow {
  std::string method;
  std::string filtering;
  std::string period;
  std::string p50, p90, p99, alpha;
};

[[nodiscard]] SummaryRow summary_row(Method method, NameFilter filter, const CohortSummary& s);

/// CSV header `method,filtering,period,p50,p90,p99,alpha`.
void write_summary_csv(std::ostream& out, std::span<const SummaryRow> rows);
/// Space-aligned text table with the same columns.
void write_summary_text(std::ostream& out, std::span<const SummaryRow> rows);

enum class FixtureKind { MonroeLike, AstorLike };

/// Bundled timelines on which the two detectors disagree: a long low-level
/// run followed by a short intense terminal burst (monroe-like), or an early
/// burst followed decades later by a longer moderate run (astor-like).
[[nodiscard]] Timeline fixture_timeline(FixtureKind kind);
[[nodiscard]] FixtureKind parse_fixture_kind(std::string_view s);

}  // namespace fame
