#include "fame/report.hpp"

#include <algorithm>
#include <ostream>

#include <fmt/format.h>

#include "fame/errors.hpp"
#include "fame/hashing.hpp"
#include "json.hpp"

namespace fame {

namespace chr = std::chrono;

std::string_view to_string(NameFilter f) {
  switch (f) {
    case NameFilter::All: return "all";
    case NameFilter::TopK: return "top1000";
    case NameFilter::TopFraction: return "top0.1pct";
  }
  return "?";
}

std::string_view display_name(NameFilter f) {
  switch (f) {
    case NameFilter::All: return "all";
    case NameFilter::TopK: return "top 1000";
    case NameFilter::TopFraction: return "top 0.1%";
  }
  return "?";
}

NameFilter parse_name_filter(std::string_view s) {
  if (s == "all") return NameFilter::All;
  if (s == "top1000" || s == "top-1000") return NameFilter::TopK;
  if (s == "top0.1pct" || s == "top-0.1%" || s == "top0.1%") return NameFilter::TopFraction;
  throw ConfigError("unknown filter '" + std::string(s) + "' (all, top-1000, top-0.1%)");
}

std::uint64_t cohort_seed(std::uint64_t base, std::string_view stream_label, const Cohort& cohort) {
  return derive_seed(base, fmt::format("{}/{}/{}", stream_label, cohort.width.label(),
                                       cohort.bucket_start.str()));
}

std::vector<CohortSummary> summarize_cohorts(std::span<const FamePeriod> periods, CohortWidth width,
                                             const StatsOptions& opts, bool with_bootstrap,
                                             std::string_view stream_label) {
  std::vector<CohortSummary> out;
  for (auto& cohort : assign_cohorts(periods, width)) {
    CohortSummary s;
    s.cohort = std::move(cohort);
    std::vector<double> sorted = s.cohort.durations;
    std::sort(sorted.begin(), sorted.end());
    s.p50 = quantile_sorted(sorted, 0.5);
    s.p90 = quantile_sorted(sorted, 0.9);
    s.p99 = quantile_sorted(sorted, 0.99);
    try {
      s.fit = fit_power_law(sorted, opts.tail_quantile);
    } catch (const StatsError& e) {
      s.fit_error = e.code();
    }
    if (with_bootstrap) {
      const Statistic stats[] = {Statistic::quantile(0.5), Statistic::quantile(0.9),
                                 Statistic::quantile(0.99),
                                 Statistic::power_law_alpha(opts.tail_quantile)};
      BootstrapConfig cfg = opts.bootstrap;
      cfg.seed = cohort_seed(opts.bootstrap.seed, stream_label, s.cohort);
      const auto outcomes = bootstrap_many(sorted, stats, cfg);
      s.bootstrapped = true;
      s.b50 = outcomes[0];
      s.b90 = outcomes[1];
      s.b99 = outcomes[2];
      s.balpha = outcomes[3];
    }
    out.push_back(std::move(s));
  }
  return out;
}

void write_quantile_series(std::ostream& out, std::span<const CohortSummary> rows) {
  const bool intervals = !rows.empty() && rows.front().bootstrapped;
  out << "bucket_start,width,n,p50,p90,p99";
  if (intervals) out << ",p50_lo,p50_hi,p90_lo,p90_hi,p99_lo,p99_hi";
  out << '\n';
  for (const auto& r : rows) {
    out << format_date(r.cohort.bucket_start.first_day()) << ',' << r.cohort.width.label() << ','
        << r.cohort.durations.size() << ',' << format_duration(r.p50) << ',' << format_duration(r.p90)
        << ',' << format_duration(r.p99);
    if (intervals) {
      for (const auto* b : {&r.b50, &r.b90, &r.b99}) {
        if (b->interval) {
          out << ',' << format_duration(b->interval->lo) << ',' << format_duration(b->interval->hi);
        } else {
          out << ",,";
        }
      }
    }
    out << '\n';
  }
}

void write_curve(std::ostream& out, const CohortSummary& row) {
  out << "# reference_slope=";
  if (row.fit) {
    out << fmt::format("{:.6f}", row.fit->reference_slope());
  } else {
    out << "NA";
  }
  out << '\n' << "x,y\n";
  for (const auto& p : cumulative_curve(row.cohort)) out << format_duration(p.x) << ',' << p.y << '\n';
}

std::string fit_json(std::span<const CohortSummary> rows) {
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (const auto& r : rows) {
    nlohmann::ordered_json j;
    j["cohort"] = r.cohort.label();
    j["n"] = r.cohort.durations.size();
    if (r.fit) {
      j["alpha"] = r.fit->alpha;
      j["d_min"] = r.fit->d_min;
      j["n_tail"] = r.fit->n_tail;
    } else {
      j["alpha"] = nullptr;
      j["d_min"] = nullptr;
      j["n_tail"] = nullptr;
      j["error"] = to_string(*r.fit_error);
    }
    if (r.balpha.interval) {
      j["lo"] = r.balpha.interval->lo;
      j["hi"] = r.balpha.interval->hi;
      j["reps"] = r.balpha.interval->reps;
      j["seed"] = r.balpha.interval->seed;
    } else {
      j["lo"] = nullptr;
      j["hi"] = nullptr;
      j["reps"] = nullptr;
      j["seed"] = nullptr;
    }
    arr.push_back(std::move(j));
  }
  return arr.dump(2) + "\n";
}

namespace {

std::string duration_cell(double point, const BootstrapOutcome& b) {
  if (b.interval) return format_interval(point, b.interval->lo, b.interval->hi);
  if (b.error) return format_duration(point) + " (unstable)";
  return format_duration(point);
}

}  // namespace

SummaryRow summary_row(Method method, NameFilter filter, const CohortSummary& s) {
  SummaryRow row{std::string(to_string(method)), std::string(display_name(filter)), s.cohort.label(),
                 duration_cell(s.p50, s.b50), duration_cell(s.p90, s.b90), duration_cell(s.p99, s.b99),
                 "n/a"};
  if (s.fit) {
    if (s.balpha.interval) {
      row.alpha = format_interval(s.fit->alpha, s.balpha.interval->lo, s.balpha.interval->hi, 2);
    } else if (s.balpha.error) {
      row.alpha = fmt::format("{:.2f} (unstable)", s.fit->alpha);
    } else {
      row.alpha = fmt::format("{:.2f}", s.fit->alpha);
    }
  }
  return row;
}

void write_summary_csv(std::ostream& out, std::span<const SummaryRow> rows) {
  out << "method,filtering,period,p50,p90,p99,alpha\n";
  for (const auto& r : rows) {
    out << r.method << ',' << r.filtering << ',' << r.period << ',' << r.p50 << ',' << r.p90 << ','
        << r.p99 << ',' << r.alpha << '\n';
  }
}

void write_summary_text(std::ostream& out, std::span<const SummaryRow> rows) {
  const std::vector<std::string> header = {"method", "filtering", "period", "50th %ile (days)",
                                           "90th %ile (days)", "99th %ile (days)", "power law exponent"};
  std::vector<std::size_t> width(header.size());
  for (std::size_t i = 0; i < header.size(); ++i) width[i] = header[i].size();
  const auto cells = [](const SummaryRow& r) {
    return std::vector<std::string>{r.method, r.filtering, r.period, r.p50, r.p90, r.p99, r.alpha};
  };
  for (const auto& r : rows) {
    const auto c = cells(r);
    for (std::size_t i = 0; i < c.size(); ++i) width[i] = std::max(width[i], c[i].size());
  }
  const auto line = [&](const std::vector<std::string>& c) {
    std::string s;
    for (std::size_t i = 0; i < c.size(); ++i) {
      if (i > 0) s += "  ";
      s += fmt::format("{:<{}}", c[i], width[i]);
    }
    while (!s.empty() && s.back() == ' ') s.pop_back();
    out << s << '\n';
  };
  line(header);
  std::size_t total = 2 * (header.size() - 1);
  for (const auto w : width) total += w;
  out << std::string(total, '-') << '\n';
  for (const auto& r : rows) line(cells(r));
}

namespace {

Date ymd(int y, unsigned m, unsigned d) { return Date{chr::year{y} / chr::month{m} / chr::day{d}}; }

void add_daily(Timeline& t, Date from, Date to, int step_days, std::int64_t multiplicity) {
  for (Date d = from; d <= to; d += chr::days{step_days}) t.events.push_back({midnight(d), multiplicity});
}

}  // namespace

Timeline fixture_timeline(FixtureKind kind) {
  Timeline t;
  if (kind == FixtureKind::MonroeLike) {
    t.name = "Marilyn Monroe";
    // Steady low-level coverage, one mention every five days.
    add_daily(t, ymd(1952, 2, 13), ymd(1961, 11, 10), 5, 1);
    t.events.push_back({midnight(ymd(1961, 11, 15)), 1});
    // Intense terminal burst.
    add_daily(t, ymd(1962, 7, 18), ymd(1962, 8, 28), 1, 30);
  } else {
    t.name = "John Jacob Astor";
    // Early intense burst.
    add_daily(t, ymd(1896, 2, 15), ymd(1896, 3, 8), 1, 20);
    // Later, longer stretch at a moderate level.
    add_daily(t, ymd(1912, 3, 23), ymd(1912, 8, 31), 4, 2);
    // Scattered retrospective mentions.
    for (const int y : {1913, 1922, 1937, 1953}) t.events.push_back({midnight(ymd(y, 4, 15)), 1});
  }
  normalize(t);
  return t;
}

FixtureKind parse_fixture_kind(std::string_view s) {
  if (s == "monroe-like") return FixtureKind::MonroeLike;
  if (s == "astor-like") return FixtureKind::AstorLike;
  throw ConfigError("unknown fixture '" + std::string(s) + "'");
}

}  // namespace fame
