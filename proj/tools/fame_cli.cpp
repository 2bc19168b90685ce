// Command-line front end: each pipeline stage is a subcommand whose inputs
// and outputs are plain files, plus `run` for the whole pipeline.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "CLI11.hpp"
#include "fame/corpus_io.hpp"
#include "fame/errors.hpp"
#include "fame/hashing.hpp"
#include "fame/name_extract.hpp"
#include "fame/parallel.hpp"
#include "fame/pipeline.hpp"
#include "fame/report.hpp"
#include "fame/sampler.hpp"
#include "fame/synth.hpp"

namespace fs = std::filesystem;
using namespace fame;

namespace {

constexpr const char* kFormats = R"txt(File formats
  Documents (JSON lines, UTF-8), one object per line:
    raw:        {"id": "a", "date": "1912-04-15", "text": "..."}
    pre-tagged: {"id": "b", "date": "2009-07-01T14:03:00Z", "mentions": [["Michael Jackson", 3]]}
  Pre-tagged TSV alternative: date<TAB>name<TAB>count (id = <file>:<line>).
  Word lists (gazetteer, honorifics, stop words): one entry per line.
  sampling.csv:        month,n_t,kept
  timelines TSV:       name<TAB>timestamp<TAB>multiplicity, sorted by (name, timestamp)
  periods_<m>_<f>.csv: name,method,start,end,peak_date,duration_days
                       (ISO dates; durations with 3 decimals when fractional)
  quantiles_*.csv:     bucket_start,width,n,p50,p90,p99
                       [,p50_lo,p50_hi,p90_lo,p90_hi,p99_lo,p99_hi]
  curves/<m>_<f>_<cohort>.csv: "# reference_slope=<alpha+1>" then x,y
                       (y = number of durations greater than x)
  fit_<m>_<f>.json:    [{cohort, n, alpha, d_min, n_tail, lo, hi, reps, seed}, ...]
  summary.csv:         method,filtering,period,p50,p90,p99,alpha
                       cells formatted "27 (25 .. 29)"
  manifest.json:       config, input SHA-256 digests, output list
Exit codes: 0 ok, 2 config error, 3 data error, 4 statistics error.)txt";

struct CommonFlags {
  std::string window_start = "1895-01";
  std::string window_end = "2011-01";
  std::string schema = "pre-tagged";
  std::string gazetteer, honorifics, stop_words;
  std::vector<std::string> methods{"spike", "continuity"};
  std::vector<std::string> filters{"all", "top-1000", "top-0.1%"};
  std::vector<std::string> widths{"3m", "5y"};
  std::string summary_width = "5y";
  std::int64_t n_min = 0;
  bool no_sample = false;
  std::string underfull = "drop-month";
  std::uint64_t seed = 0;
  int reps = 25000;
  double level = 0.99;
  double tail_quantile = 0.8;
  std::int64_t min_total = 10;
  double min_duration = 2.0;
  int workers = 0;
};

void add_window(CLI::App* app, CommonFlags& f) {
  app->add_option("--window-start", f.window_start, "First month analysed (YYYY-MM)")->capture_default_str();
  app->add_option("--window-end", f.window_end, "Month after the last one analysed (YYYY-MM)")
      ->capture_default_str();
}

void add_recognizer(CLI::App* app, CommonFlags& f) {
  app->add_option("--schema", f.schema, "Input schema: raw | pre-tagged")->capture_default_str();
  app->add_option("--gazetteer", f.gazetteer, "Given-name list (raw input)");
  app->add_option("--honorifics", f.honorifics, "Honorific list (raw input)");
  app->add_option("--stop-words", f.stop_words, "Capitalized false-positive list (raw input)");
}

void add_sampling(CLI::App* app, CommonFlags& f) {
  app->add_option("--n-min", f.n_min, "Target documents per month (required, no default)");
  app->add_option("--underfull", f.underfull, "Months below n-min: drop-month | keep-all | fail")
      ->capture_default_str();
}

void add_selection(CLI::App* app, CommonFlags& f) {
  app->add_option("--methods", f.methods, "spike, continuity")->delimiter(',')->capture_default_str();
  app->add_option("--filters", f.filters, "all, top-1000, top-0.1%")->delimiter(',')->capture_default_str();
  app->add_option("--min-total", f.min_total, "Minimum mentions per name")->capture_default_str();
  app->add_option("--min-duration", f.min_duration, "Minimum period duration in days")->capture_default_str();
}

void add_statistics(CLI::App* app, CommonFlags& f) {
  app->add_option("--widths", f.widths, "Cohort widths, e.g. 3m,5y")->delimiter(',')->capture_default_str();
  app->add_option("--summary-width", f.summary_width, "Cohort width for intervals, fits and the table")
      ->capture_default_str();
  app->add_option("--reps", f.reps, "Bootstrap replicates")->capture_default_str();
  app->add_option("--level", f.level, "Bootstrap interval level")->capture_default_str();
  app->add_option("--tail-quantile", f.tail_quantile, "Power-law tail threshold quantile")
      ->capture_default_str();
}

YearMonth month_arg(const std::string& s, const char* what) {
  const auto m = parse_year_month(s);
  if (!m) throw ConfigError(fmt::format("invalid {} '{}' (expected YYYY-MM)", what, s));
  return *m;
}

Schema schema_arg(const std::string& s) {
  if (s == "raw") return Schema::RawText;
  if (s == "pre-tagged") return Schema::PreTagged;
  throw ConfigError("unknown schema '" + s + "'");
}

RunConfig to_config(const CommonFlags& f) {
  RunConfig cfg;
  cfg.window = AnalysisWindow(month_arg(f.window_start, "window start"), month_arg(f.window_end, "window end"));
  cfg.sample = !f.no_sample;
  if (f.n_min > 0) cfg.n_min = f.n_min;
  cfg.underfull = parse_underfull_policy(f.underfull);
  cfg.seed = f.seed;
  cfg.schema = schema_arg(f.schema);
  if (!f.gazetteer.empty()) cfg.gazetteer = f.gazetteer;
  if (!f.honorifics.empty()) cfg.honorifics = f.honorifics;
  if (!f.stop_words.empty()) cfg.stop_words = f.stop_words;
  cfg.methods.clear();
  for (const auto& m : f.methods) cfg.methods.push_back(parse_method(m));
  cfg.filters.clear();
  for (const auto& x : f.filters) cfg.filters.push_back(parse_name_filter(x));
  cfg.widths.clear();
  for (const auto& w : f.widths) cfg.widths.push_back(parse_cohort_width(w));
  cfg.summary_width = parse_cohort_width(f.summary_width);
  cfg.reps = f.reps;
  cfg.level = f.level;
  cfg.tail_quantile = f.tail_quantile;
  cfg.min_total = f.min_total;
  cfg.min_duration = f.min_duration;
  cfg.workers = f.workers;
  return cfg;
}

std::vector<Document> read_all(const std::vector<std::string>& inputs, Schema schema) {
  std::vector<Document> docs;
  for (const auto& in : inputs) {
    ReadStats stats;
    auto part = read_documents(in, schema, &stats);
    if (stats.malformed > 0) {
      std::cerr << fmt::format("{}: skipped {} malformed of {} lines\n", in, stats.malformed, stats.lines);
    }
    std::move(part.begin(), part.end(), std::back_inserter(docs));
  }
  return docs;
}

template <typename Body>
void write_text(const fs::path& path, Body body) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write " + path.string());
  body(out);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Measure how long names stay in the news: fame periods, cohort statistics, tail fits."};
  app.footer(kFormats);
  app.require_subcommand(1);
  app.fallthrough();
  CommonFlags f;
  app.add_option("--seed", f.seed, "Master seed; every stage derives its own seed from it")
      ->capture_default_str();
  app.add_option("--workers", f.workers, "Worker threads (0 = all cores)")->capture_default_str();

  // synth
  std::string synth_config, synth_out;
  auto* synth_cmd = app.add_subcommand("synth", "Generate a pre-tagged corpus from a JSON model spec");
  synth_cmd->add_option("--config", synth_config, "Model spec (JSON)")->required();
  synth_cmd->add_option("--out", synth_out, "Output JSON-lines corpus")->required();
  synth_cmd->footer(R"(Spec schema:
  {"seed": 7, "window": {"start": "1900-01", "end": "1901-01"},
   "volume": [{"start": "1900-01-01", "end": "1901-01-01", "per_day": 40}],
   "profiles": [{"name": "Ada Lovelace",
                 "segments": [{"start": "1900-02-01", "end": "1900-04-01", "p": 0.01}]}]}
Segment ends are exclusive; --seed, when given, overrides the spec seed.)");

  // extract
  std::vector<std::string> inputs;
  std::string out_path;
  auto* extract_cmd = app.add_subcommand("extract", "Recognize names in raw documents; write pre-tagged JSONL");
  extract_cmd->add_option("--input", inputs, "Raw JSON-lines corpus")->required();
  extract_cmd->add_option("--out", out_path, "Output pre-tagged corpus")->required();
  extract_cmd->add_option("--gazetteer", f.gazetteer, "Given-name list")->required();
  extract_cmd->add_option("--honorifics", f.honorifics, "Honorific list");
  extract_cmd->add_option("--stop-words", f.stop_words, "Capitalized false-positive list");

  // sample
  std::string report_path;
  bool sample_window = false;
  auto* sample_cmd = app.add_subcommand("sample", "Subsample documents towards n-min per month");
  sample_cmd->add_option("--input", inputs, "Corpus files")->required();
  sample_cmd->add_option("--out", out_path, "Sampled corpus (JSON lines)")->required();
  sample_cmd->add_option("--report", report_path, "Sampling report CSV");
  sample_cmd->add_flag("--apply-window", sample_window, "Drop documents outside the window first");
  add_window(sample_cmd, f);
  add_recognizer(sample_cmd, f);
  add_sampling(sample_cmd, f);

  // periods
  std::string out_dir, timelines_path;
  auto* periods_cmd = app.add_subcommand("periods", "Detect fame periods for each method and filter");
  periods_cmd->add_option("--input", inputs, "Corpus files (already sampled)")->required();
  periods_cmd->add_option("--out-dir", out_dir, "Directory for periods_<method>_<filter>.csv")->required();
  periods_cmd->add_option("--timelines", timelines_path, "Also write the timelines TSV here");
  add_window(periods_cmd, f);
  add_recognizer(periods_cmd, f);
  add_selection(periods_cmd, f);

  // stats
  std::string periods_path, label;
  auto* stats_cmd = app.add_subcommand("stats", "Cohort quantiles, tail fits, curves from a periods CSV");
  stats_cmd->add_option("--periods", periods_path, "periods_<method>_<filter>.csv")->required();
  stats_cmd->add_option("--out-dir", out_dir, "Output directory")->required();
  stats_cmd->add_option("--label", label, "Stream label for seeds/file names (default: from file name)");
  add_statistics(stats_cmd, f);

  // report
  auto* report_cmd = app.add_subcommand("report", "Summary table recomputed from persisted periods CSVs");
  report_cmd->add_option("--dir", out_dir, "Directory holding periods_<method>_<filter>.csv")->required();
  report_cmd->add_option("--out", out_path, "Directory for summary.csv/summary.txt (default: --dir)");
  report_cmd->add_option("--methods", f.methods, "spike, continuity")->delimiter(',')->capture_default_str();
  report_cmd->add_option("--filters", f.filters, "all, top-1000, top-0.1%")->delimiter(',')->capture_default_str();
  add_statistics(report_cmd, f);

  // run
  auto* run_cmd = app.add_subcommand("run", "Whole pipeline: read, window, sample, detect, summarize");
  run_cmd->add_option("--input", inputs, "Corpus files")->required();
  run_cmd->add_option("--out-dir", out_dir, "Output directory")->required();
  run_cmd->add_flag("--no-sample", f.no_sample, "Skip volume normalization (for comparison runs)");
  add_window(run_cmd, f);
  add_recognizer(run_cmd, f);
  add_sampling(run_cmd, f);
  add_selection(run_cmd, f);
  add_statistics(run_cmd, f);

  // fixture
  std::string fixture_kind;
  auto* fixture_cmd = app.add_subcommand("fixture", "Write a bundled demonstration timeline (TSV)");
  fixture_cmd->add_option("--kind", fixture_kind, "monroe-like | astor-like")->required();
  fixture_cmd->add_option("--out", out_path, "Timeline TSV (default: stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : exit_code(ErrorKind::Config);
  }

  try {
    set_worker_count(f.workers);

    if (*synth_cmd) {
      auto spec = synth::load_spec(synth_config);
      if (app.count("--seed") > 0) spec.seed = f.seed;
      const auto docs = synth::generate_corpus(spec);
      write_documents(fs::path(synth_out), docs);
      std::cerr << fmt::format("wrote {} documents\n", docs.size());
    } else if (*extract_cmd) {
      RecognizerConfig rc;
      rc.given_names = load_word_list(f.gazetteer);
      if (!f.honorifics.empty()) rc.honorifics = load_word_list(f.honorifics);
      if (!f.stop_words.empty()) rc.stop_capitalized = load_word_list(f.stop_words);
      rc.validate();
      auto docs = read_all(inputs, Schema::RawText);
      const auto n = static_cast<std::int64_t>(docs.size());
#pragma omp parallel for schedule(dynamic, 256)
      for (std::int64_t i = 0; i < n; ++i) docs[i] = to_pre_tagged(docs[i], rc);
      write_documents(fs::path(out_path), docs);
    } else if (*sample_cmd) {
      if (f.n_min < 1) throw ConfigError("--n-min is required (the target has no default)");
      const RunConfig cfg = to_config(f);
      auto docs = read_all(inputs, cfg.schema);
      if (sample_window) docs = window_filter(docs, cfg.window);
      const auto volumes = month_volumes(docs);
      const auto result = sample_uniform(docs, volumes, SamplerConfig{f.n_min, cfg.sampler_seed(), cfg.underfull});
      write_documents(fs::path(out_path), result.kept);
      if (!report_path.empty()) {
        write_text(report_path, [&](std::ostream& o) { write_sampling_report(o, result.report); });
      }
    } else if (*periods_cmd) {
      f.no_sample = true;
      RunConfig cfg = to_config(f);
      cfg.validate();
      const auto docs = read_all(inputs, cfg.schema);
      const auto windowed = window_filter(docs, cfg.window);
      std::optional<RecognizerConfig> rc;
      if (cfg.schema == Schema::RawText) rc = load_recognizer(cfg);
      const auto timelines = timelines_from(windowed, rc ? &*rc : nullptr);
      if (!timelines_path.empty()) {
        write_text(timelines_path, [&](std::ostream& o) { write_timelines(o, timelines); });
      }
      for (const auto& set : compute_period_sets(timelines, cfg)) {
        write_text(fs::path(out_dir) / ("periods_" + set.label() + ".csv"),
                   [&](std::ostream& o) { write_periods(o, set.periods); });
      }
    } else if (*stats_cmd) {
      f.no_sample = true;
      RunConfig cfg = to_config(f);
      cfg.validate();
      std::ifstream in(periods_path);
      if (!in) throw DataError("cannot open " + periods_path);
      PeriodSet set{Method::Continuity, NameFilter::All, read_periods(in)};
      if (set.periods.empty()) throw StatsError(StatsErrorCode::EmptyCohort, "no periods in " + periods_path);
      std::string stream = label;
      if (stream.empty()) {
        stream = fs::path(periods_path).stem().string();
        if (stream.starts_with("periods_")) stream = stream.substr(8);
      }
      const auto opts = cfg.stats_options();
      auto widths = cfg.widths;
      if (std::find(widths.begin(), widths.end(), cfg.summary_width) == widths.end()) {
        widths.push_back(cfg.summary_width);
      }
      for (const auto width : widths) {
        const bool primary = width == cfg.summary_width;
        const auto rows = summarize_cohorts(set.periods, width, opts, primary, stream);
        write_text(fs::path(out_dir) / fmt::format("quantiles_{}_{}.csv", stream, width.label()),
                   [&](std::ostream& o) { write_quantile_series(o, rows); });
        if (!primary) continue;
        write_text(fs::path(out_dir) / ("fit_" + stream + ".json"), [&](std::ostream& o) { o << fit_json(rows); });
        for (const auto& r : rows) {
          write_text(fs::path(out_dir) / "curves" / fmt::format("{}_{}.csv", stream, r.cohort.label()),
                     [&](std::ostream& o) { write_curve(o, r); });
        }
      }
    } else if (*report_cmd) {
      f.no_sample = true;
      RunConfig cfg = to_config(f);
      cfg.validate();
      const auto rows = summary_from_directory(out_dir, cfg);
      const fs::path dest = out_path.empty() ? fs::path(out_dir) : fs::path(out_path);
      write_text(dest / "summary.csv", [&](std::ostream& o) { write_summary_csv(o, rows); });
      write_text(dest / "summary.txt", [&](std::ostream& o) { write_summary_text(o, rows); });
      write_summary_text(std::cout, rows);
    } else if (*run_cmd) {
      const RunConfig cfg = to_config(f);
      std::vector<fs::path> paths(inputs.begin(), inputs.end());
      const auto result = run_pipeline(cfg, paths, out_dir);
      write_summary_text(std::cout, result.summary);
    } else if (*fixture_cmd) {
      const auto t = fixture_timeline(parse_fixture_kind(fixture_kind));
      const Timeline one[] = {t};
      if (out_path.empty()) {
        write_timelines(std::cout, one);
      } else {
        write_text(out_path, [&](std::ostream& o) { write_timelines(o, one); });
      }
      const AnalysisWindow window(month_of(t.events.front().at), month_of(t.events.back().at).next());
      const auto grid = WeekGrid::for_window(window);
      const FamePeriod periods[] = {spike_period(t, grid), continuity_period(t)};
      write_periods(std::cerr, periods);
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_code(e.kind());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_code(ErrorKind::Data);
  }
  return 0;
}
