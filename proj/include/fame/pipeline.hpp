#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "fame/corpus_io.hpp"
#include "fame/name_extract.hpp"
#include "fame/peaks.hpp"
#include "fame/report.hpp"
#include "fame/sampler.hpp"
#include "fame/stats.hpp"
#include "fame/timeline.hpp"

namespace fame {

struct RunConfig {
  AnalysisWindow window{{1895, 1}, {2011, 1}};
  bool sample = true;
  std::optional<std::int64_t> n_min;  // required when sampling
  UnderfullPolicy underfull = UnderfullPolicy::DropMonth;
  std::uint64_t seed = 0;

  Schema schema = Schema::PreTagged;
  std::optional<std::filesystem::path> gazetteer;
  std::optional<std::filesystem::path> honorifics;
  std::optional<std::filesystem::path> stop_words;

  std::vector<Method> methods{Method::Spike, Method::Continuity};
  std::vector<NameFilter> filters{NameFilter::All, NameFilter::TopK, NameFilter::TopFraction};
  std::vector<CohortWidth> widths{CohortWidth::three_months(), CohortWidth::five_years()};
  /// Width that gets bootstrap intervals, tail fits, curves and table rows.
  CohortWidth summary_width = CohortWidth::five_years();

  int reps = 25000;
  double level = 0.99;
  double tail_quantile = 0.8;
  std::int64_t min_total = 10;
  double min_duration = 2.0;
  std::int64_t top_k = 1000;
  Fraction top_fraction{1, 1000};
  int workers = 0;  // 0 = all cores

  /// Throws ConfigError on an invalid combination.
  void validate() const;
  [[nodiscard]] StatsOptions stats_options() const;
  [[nodiscard]] std::uint64_t sampler_seed() const;
};

/// Recognizer built from the configured word lists; raw-text runs require
/// a gazetteer.
[[nodiscard]] RecognizerConfig load_recognizer(const RunConfig& cfg);

/// Aggregates mentions of all documents into timelines.
[[nodiscard]] std::vector<Timeline> timelines_from(std::span<const Document> docs,
                                                   const RecognizerConfig* recognizer);

struct PeriodSet {
  Method method;
  NameFilter filter;
  std::vector<FamePeriod> periods;

  /// "<method>_<filter>", used in file names and seed derivation.
  [[nodiscard]] std::string label() const;
};

/// Period detection, period filters and name-set filters for every selected
/// (method, filter) pair. Durations are rounded to their persisted precision.
[[nodiscard]] std::vector<PeriodSet> compute_period_sets(std::span<const Timeline> timelines,
                                                         const RunConfig& cfg);

/// Statistics outputs and summary rows for one period set; `files` receives
/// the names of the files written under `out_dir`.
std::vector<SummaryRow> write_period_set_outputs(const PeriodSet& set, const RunConfig& cfg,
                                                 const std::filesystem::path& out_dir,
                                                 std::vector<std::filesystem::path>& files);

/// Summary table rows recomputed from persisted periods CSVs
/// (periods_<method>_<filter>.csv) in `dir`.
[[nodiscard]] std::vector<SummaryRow> summary_from_directory(const std::filesystem::path& dir,
                                                             const RunConfig& cfg);

struct RunResult {
  std::vector<std::filesystem::path> files;  // relative to out_dir, sorted
  std::vector<SummaryRow> summary;
};

/// End-to-end run. On any error the files written so far are removed and
/// the error is rethrown.
RunResult run_pipeline(const RunConfig& cfg, std::span<const std::filesystem::path> inputs,
                       const std::filesystem::path& out_dir);

/// Lower-case hex SHA-256 of a file's bytes.
[[nodiscard]] std::string sha256_file(const std::filesystem::path& path);

}  // namespace fame
