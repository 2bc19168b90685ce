#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "fame/errors.hpp"
#include "fame/parallel.hpp"
#include "fame/peaks.hpp"
#include "fame/time.hpp"

namespace fame {

/// Calendar-aligned bucket width in months. A bucket starts at month index
/// (year * 12 + month - 1) divisible by `months`, so five-year buckets start
/// in years divisible by five and quarters in Jan/Apr/Jul/Oct.
struct CohortWidth {
  int months = 60;

  [[nodiscard]] static constexpr CohortWidth three_months() { return {3}; }
  [[nodiscard]] static constexpr CohortWidth five_years() { return {60}; }

  /// "3m", "5y", or "<n>m" / "<n>y".
  [[nodiscard]] std::string label() const;

  friend bool operator==(const CohortWidth&, const CohortWidth&) = default;
};

[[nodiscard]] CohortWidth parse_cohort_width(std::string_view s);
[[nodiscard]] YearMonth bucket_of(Date d, CohortWidth width);

/// Names whose peak date falls in [bucket_start, bucket_start + width).
struct Cohort {
  YearMonth bucket_start;
  CohortWidth width;
  std::vector<double> durations;

  /// "1905-9" / "1910-14" for five-year buckets starting in a year divisible
  /// by five, otherwise "YYYY-MM".
  [[nodiscard]] std::string label() const;
};

/// Partitions periods by peak date; cohorts ascending by bucket start, each
/// holding durations in input order. Empty buckets are omitted.
[[nodiscard]] std::vector<Cohort> assign_cohorts(std::span<const FamePeriod> periods,
                                                 CohortWidth width);

/// 1-based nearest rank ceil(q * n), clamped to [1, n].
[[nodiscard]] std::size_t nearest_rank(double q, std::size_t n);

/// Nearest-rank quantile. Throws StatsError(EmptyCohort) on empty input and
/// std::invalid_argument unless 0 < q <= 1.
[[nodiscard]] double quantile(std::span<const double> values, double q);
[[nodiscard]] double quantile_sorted(std::span<const double> sorted, double q);

inline constexpr std::size_t kMinPowerLawTail = 10;

struct PowerLawFit {
  double alpha = 0.0;  // negative: p(d) ~ d^alpha
  double d_min = 0.0;
  std::int64_t n_tail = 0;

  /// Slope of the matching reference line on a log-log cumulative plot.
  [[nodiscard]] double reference_slope() const { return alpha + 1.0; }
};

/// Continuous power-law MLE magnitude 1 + n / sum(ln(d_i / d_min)) over
/// the given tail values, returned with the negative sign convention.
/// Throws StatsError(DegenerateTail) when the log sum is not positive.
[[nodiscard]] double power_law_mle(std::span<const double> tail, double d_min);

/// Tail fit over durations strictly above the nearest-rank `tail_quantile`.
[[nodiscard]] PowerLawFit fit_power_law(std::span<const double> durations,
                                        double tail_quantile = 0.8,
                                        std::size_t min_tail = kMinPowerLawTail);

/// A statistic that can be bootstrapped.
class Statistic {
 public:
  enum class Kind { Quantile, PowerLawAlpha };

  [[nodiscard]] static Statistic quantile(double q) { return {Kind::Quantile, q}; }
  [[nodiscard]] static Statistic power_law_alpha(double tail_quantile = 0.8) {
    return {Kind::PowerLawAlpha, tail_quantile};
  }

  [[nodiscard]] Kind kind() const { return kind_; }
  [[nodiscard]] double parameter() const { return param_; }
  [[nodiscard]] std::string name() const;

  /// Throws StatsError when the statistic is undefined for `values`.
  [[nodiscard]] double evaluate(std::span<const double> values) const;

 private:
  Statistic(Kind k, double p) : kind_(k), param_(p) {}
  Kind kind_;
  double param_;
};

struct BootstrapConfig {
  int reps = 25000;
  double level = 0.99;
  std::uint64_t seed = 0;

  void validate() const;
};

struct BootstrapInterval {
  double point = 0.0;
  double lo = 0.0;
  double hi = 0.0;
  double level = 0.99;
  int reps = 0;
  std::uint64_t seed = 0;
};

/// Fraction of failed replicates above which a bootstrap is rejected.
inline constexpr double kMaxFailedReplicates = 0.01;

/// Percentile bootstrap: `reps` resamples of size n with replacement, each a
/// pure function of (seed, replicate index), drawn over the values in
/// ascending order; lo/hi are the central-`level` nearest-rank quantiles of
/// the replicate statistics.
[[nodiscard]] BootstrapInterval bootstrap(std::span<const double> values, const Statistic& stat,
                                          const BootstrapConfig& cfg,
                                          Execution exec = Execution::Parallel);

struct BootstrapOutcome {
  std::optional<BootstrapInterval> interval;
  std::optional<StatsErrorCode> error;
};

/// Bootstraps several statistics over the same replicates. Per-statistic
/// failures are reported in the outcome rather than thrown.
[[nodiscard]] std::vector<BootstrapOutcome> bootstrap_many(std::span<const double> values,
                                                           std::span<const Statistic> stats,
                                                           const BootstrapConfig& cfg,
                                                           Execution exec = Execution::Parallel);

/// Materializes every resample and evaluates the statistic directly.
/// Slow; kept as the reference the kernel is tested against.
[[nodiscard]] BootstrapInterval bootstrap_reference(std::span<const double> values,
                                                    const Statistic& stat,
                                                    const BootstrapConfig& cfg);

/// Indices (into the ascending-sorted values) of replicate `rep`.
[[nodiscard]] std::vector<std::size_t> resample_indices(std::uint64_t seed, int rep, std::size_t n);

struct CurvePoint {
  double x = 0.0;
  std::int64_t y = 0;  // number of durations strictly greater than x

  friend bool operator==(const CurvePoint&, const CurvePoint&) = default;
};

/// One point per distinct duration, ascending in x.
[[nodiscard]] std::vector<CurvePoint> cumulative_curve(std::span<const double> durations);
[[nodiscard]] inline std::vector<CurvePoint> cumulative_curve(const Cohort& c) {
  return cumulative_curve(c.durations);
}

/// "27 (25 .. 29)"; `decimals` < 0 prints durations (integers bare, else
/// three decimals).
[[nodiscard]] std::string format_interval(double point, double lo, double hi, int decimals = -1);

}  // namespace fame
