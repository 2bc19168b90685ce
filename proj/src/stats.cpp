#include "fame/stats.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <map>
#include <random>
#include <stdexcept>

#include <fmt/format.h>

#include "fame/hashing.hpp"

namespace fame {

namespace {

std::int64_t floor_mod(std::int64_t a, std::int64_t m) {
  const auto r = a % m;
  return r < 0 ? r + m : r;
}

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

}  // namespace

std::string CohortWidth::label() const {
  if (months % 12 == 0) return fmt::format("{}y", months / 12);
  return fmt::format("{}m", months);
}

CohortWidth parse_cohort_width(std::string_view s) {
  if (s.size() >= 2 && (s.back() == 'm' || s.back() == 'y')) {
    int n = 0;
    const auto digits = s.substr(0, s.size() - 1);
    const auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), n);
    if (ec == std::errc{} && ptr == digits.data() + digits.size() && n > 0) {
      return {s.back() == 'y' ? n * 12 : n};
    }
  }
  throw ConfigError("invalid cohort width '" + std::string(s) + "' (expected e.g. 3m or 5y)");
}

YearMonth bucket_of(Date d, CohortWidth width) {
  const auto idx = month_of(d).index();
  const auto start = idx - floor_mod(idx, width.months);
  return {static_cast<int>(start / 12), static_cast<unsigned>(start % 12 + 1)};
}

std::string Cohort::label() const {
  if (width.months == 60 && bucket_start.month == 1 && bucket_start.year % 5 == 0) {
    const int last = bucket_start.year + 4;
    // "1905-9", "1910-14", "2000-04"
    if (bucket_start.year % 10 == 5) return fmt::format("{}-{}", bucket_start.year, last % 10);
    return fmt::format("{}-{:02}", bucket_start.year, last % 100);
  }
  return bucket_start.str();
}

std::vector<Cohort> assign_cohorts(std::span<const FamePeriod> periods, CohortWidth width) {
  if (width.months < 1) throw ConfigError("cohort width must be positive");
  std::map<YearMonth, std::vector<double>> buckets;
  for (const auto& p : periods) buckets[bucket_of(p.peak_date, width)].push_back(p.duration_days);
  std::vector<Cohort> out;
  out.reserve(buckets.size());
  for (auto& [start, durations] : buckets) out.push_back({start, width, std::move(durations)});
  return out;
}

std::size_t nearest_rank(double q, std::size_t n) {
  const auto r = static_cast<std::int64_t>(std::ceil(q * static_cast<double>(n) - 1e-9));
  return static_cast<std::size_t>(std::clamp<std::int64_t>(r, 1, static_cast<std::int64_t>(n)));
}

double quantile_sorted(std::span<const double> sorted, double q) {
  if (sorted.empty()) throw StatsError(StatsErrorCode::EmptyCohort, "quantile of an empty list");
  if (!(q > 0.0 && q <= 1.0)) throw std::invalid_argument("quantile q must be in (0, 1]");
  return sorted[nearest_rank(q, sorted.size()) - 1];
}

double quantile(std::span<const double> values, double q) {
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  return quantile_sorted(sorted, q);
}

double power_law_mle(std::span<const double> tail, double d_min) {
  double log_sum = 0.0;
  for (const double d : tail) log_sum += std::log(d / d_min);
  if (!(log_sum > 0.0) || !std::isfinite(log_sum)) {
    throw StatsError(StatsErrorCode::DegenerateTail, "log-ratio sum of the tail is not positive");
  }
  return -(1.0 + static_cast<double>(tail.size()) / log_sum);
}

PowerLawFit fit_power_law(std::span<const double> durations, double tail_quantile,
                          std::size_t min_tail) {
  std::vector<double> sorted(durations.begin(), durations.end());
  std::sort(sorted.begin(), sorted.end());
  const double d_min = quantile_sorted(sorted, tail_quantile);
  if (!(d_min > 0.0)) {
    throw StatsError(StatsErrorCode::DegenerateTail, "tail threshold d_min is not positive");
  }
  const auto first_above = std::upper_bound(sorted.begin(), sorted.end(), d_min);
  const std::span<const double> tail(first_above, sorted.end());
  if (tail.size() < min_tail) {
    throw StatsError(StatsErrorCode::InsufficientTail,
                     fmt::format("{} durations above d_min = {}, need {}", tail.size(), d_min, min_tail));
  }
  return {power_law_mle(tail, d_min), d_min, static_cast<std::int64_t>(tail.size())};
}

std::string Statistic::name() const {
  if (kind_ == Kind::Quantile) return fmt::format("p{}", param_ * 100.0);
  return "alpha";
}

double Statistic::evaluate(std::span<const double> values) const {
  if (kind_ == Kind::Quantile) return fame::quantile(values, param_);
  return fit_power_law(values, param_).alpha;
}

void BootstrapConfig::validate() const {
  if (reps < 1) throw ConfigError("bootstrap reps must be >= 1");
  if (!(level > 0.0 && level < 1.0)) throw ConfigError("bootstrap level must be in (0, 1)");
}

std::vector<std::size_t> resample_indices(std::uint64_t seed, int rep, std::size_t n) {
  std::mt19937_64 rng(combine_seed(seed, static_cast<std::uint64_t>(rep)));
  std::uniform_int_distribution<std::size_t> pick(0, n - 1);
  std::vector<std::size_t> idx(n);
  for (auto& i : idx) i = pick(rng);
  return idx;
}

namespace {

// Summarizes replicate statistics (NaN = failed replicate) into an interval.
BootstrapOutcome summarize(double point, std::vector<double> reps, const BootstrapConfig& cfg) {
  const auto failed = static_cast<std::size_t>(
      std::count_if(reps.begin(), reps.end(), [](double v) { return std::isnan(v); }));
  if (static_cast<double>(failed) > kMaxFailedReplicates * static_cast<double>(reps.size()) ||
      failed == reps.size()) {
    return {std::nullopt, StatsErrorCode::UnstableStatistic};
  }
  std::erase_if(reps, [](double v) { return std::isnan(v); });
  std::sort(reps.begin(), reps.end());
  const double tail = (1.0 - cfg.level) / 2.0;
  return {BootstrapInterval{point, quantile_sorted(reps, tail), quantile_sorted(reps, 1.0 - tail),
                            cfg.level, cfg.reps, cfg.seed},
          std::nullopt};
}

// Evaluates every statistic on one resample given as per-index counts over
// the sorted values. `log_sorted` holds ln of the sorted values.
void evaluate_counts(std::span<const double> sorted, std::span<const double> log_sorted,
                     std::span<const std::uint32_t> counts, std::span<const Statistic> stats,
                     std::span<double> out) {
  const std::size_t n = sorted.size();
  for (std::size_t s = 0; s < stats.size(); ++s) {
    const std::size_t rank = nearest_rank(stats[s].parameter(), n);
    std::size_t cum = 0;
    std::size_t at = 0;
    for (; at < n; ++at) {
      cum += counts[at];
      if (cum >= rank) break;
    }
    if (stats[s].kind() == Statistic::Kind::Quantile) {
      out[s] = sorted[at];
      continue;
    }
    const double d_min = sorted[at];
    if (!(d_min > 0.0)) {
      out[s] = kNaN;
      continue;
    }
    std::size_t first = at + 1;
    while (first < n && sorted[first] <= d_min) ++first;
    std::int64_t n_tail = 0;
    double log_sum = 0.0;
    for (std::size_t i = first; i < n; ++i) {
      if (counts[i] == 0) continue;
      n_tail += counts[i];
      log_sum += counts[i] * (log_sorted[i] - log_sorted[at]);
    }
    if (static_cast<std::size_t>(n_tail) < kMinPowerLawTail || !(log_sum > 0.0)) {
      out[s] = kNaN;
    } else {
      out[s] = -(1.0 + static_cast<double>(n_tail) / log_sum);
    }
  }
}

}  // namespace

std::vector<BootstrapOutcome> bootstrap_many(std::span<const double> values,
                                             std::span<const Statistic> stats,
                                             const BootstrapConfig& cfg, Execution exec) {
  cfg.validate();
  if (values.empty()) throw StatsError(StatsErrorCode::EmptyCohort, "bootstrap of an empty list");

  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  std::vector<double> log_sorted(sorted.size());
  std::transform(sorted.begin(), sorted.end(), log_sorted.begin(),
                 [](double v) { return v > 0.0 ? std::log(v) : kNaN; });

  std::vector<BootstrapOutcome> outcomes(stats.size());
  std::vector<double> points(stats.size(), kNaN);
  for (std::size_t s = 0; s < stats.size(); ++s) {
    try {
      points[s] = stats[s].evaluate(sorted);
    } catch (const StatsError& e) {
      outcomes[s].error = e.code();
    }
  }

  const std::size_t n = sorted.size();
  const std::size_t n_stats = stats.size();
  std::vector<double> table(n_stats * static_cast<std::size_t>(cfg.reps));

  const auto run = [&](int r, std::vector<std::uint32_t>& counts, std::vector<double>& row) {
    std::fill(counts.begin(), counts.end(), 0U);
    std::mt19937_64 rng(combine_seed(cfg.seed, static_cast<std::uint64_t>(r)));
    std::uniform_int_distribution<std::size_t> pick(0, n - 1);
    for (std::size_t k = 0; k < n; ++k) ++counts[pick(rng)];
    evaluate_counts(sorted, log_sorted, counts, stats, row);
    for (std::size_t s = 0; s < n_stats; ++s) table[s * cfg.reps + r] = row[s];
  };

  if (exec == Execution::Parallel) {
#pragma omp parallel
    {
      std::vector<std::uint32_t> counts(n);
      std::vector<double> row(n_stats);
#pragma omp for schedule(static)
      for (int r = 0; r < cfg.reps; ++r) run(r, counts, row);
    }
  } else {
    std::vector<std::uint32_t> counts(n);
    std::vector<double> row(n_stats);
    for (int r = 0; r < cfg.reps; ++r) run(r, counts, row);
  }

  for (std::size_t s = 0; s < n_stats; ++s) {
    if (outcomes[s].error) continue;
    const auto first = table.begin() + static_cast<std::ptrdiff_t>(s * cfg.reps);
    outcomes[s] = summarize(points[s], std::vector<double>(first, first + cfg.reps), cfg);
  }
  return outcomes;
}

BootstrapInterval bootstrap(std::span<const double> values, const Statistic& stat,
                            const BootstrapConfig& cfg, Execution exec) {
  if (values.empty()) throw StatsError(StatsErrorCode::EmptyCohort, "bootstrap of an empty list");
  // Surface the statistic's own error on the original data first.
  (void)stat.evaluate(values);
  const Statistic one[] = {stat};
  auto outcome = bootstrap_many(values, one, cfg, exec).front();
  if (outcome.error) {
    throw StatsError(*outcome.error, "more than 1% of bootstrap replicates failed for " + stat.name());
  }
  return *outcome.interval;
}

BootstrapInterval bootstrap_reference(std::span<const double> values, const Statistic& stat,
                                      const BootstrapConfig& cfg) {
  cfg.validate();
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  const double point = stat.evaluate(sorted);

  std::vector<double> reps(static_cast<std::size_t>(cfg.reps));
  std::vector<double> sample(sorted.size());
  for (int r = 0; r < cfg.reps; ++r) {
    const auto idx = resample_indices(cfg.seed, r, sorted.size());
    for (std::size_t k = 0; k < idx.size(); ++k) sample[k] = sorted[idx[k]];
    try {
      reps[r] = stat.evaluate(sample);
    } catch (const StatsError&) {
      reps[r] = kNaN;
    }
  }
  auto outcome = summarize(point, std::move(reps), cfg);
  if (outcome.error) {
    throw StatsError(*outcome.error, "more than 1% of bootstrap replicates failed for " + stat.name());
  }
  return *outcome.interval;
}

std::vector<CurvePoint> cumulative_curve(std::span<const double> durations) {
  std::vector<double> sorted(durations.begin(), durations.end());
  std::sort(sorted.begin(), sorted.end());
  std::vector<CurvePoint> out;
  const auto n = static_cast<std::int64_t>(sorted.size());
  for (std::int64_t i = 0; i < n;) {
    std::int64_t j = i;
    while (j < n && sorted[j] == sorted[i]) ++j;
    out.push_back({sorted[i], n - j});
    i = j;
  }
  return out;
}

std::string format_interval(double point, double lo, double hi, int decimals) {
  const auto f = [decimals](double v) {
    return decimals < 0 ? format_duration(v) : fmt::format("{:.{}f}", v, decimals);
  };
  return fmt::format("{} ({} .. {})", f(point), f(lo), f(hi));
}

}  // namespace fame
