#include "fame/pipeline.hpp"

#include <algorithm>
#include <array>
#include <fstream>
#include <functional>
#include <memory>

#include <fmt/format.h>
#include <openssl/evp.h>

#include "fame/errors.hpp"
#include "fame/hashing.hpp"
#include "fame/parallel.hpp"
#include "json.hpp"

namespace fame {

namespace fs = std::filesystem;

void RunConfig::validate() const {
  if (methods.empty()) throw ConfigError("select at least one method");
  if (filters.empty()) throw ConfigError("select at least one filter");
  if (sample && (!n_min || *n_min < 1)) {
    throw ConfigError("--n-min is required when sampling (the target has no default)");
  }
  if (schema == Schema::RawText && !gazetteer) throw ConfigError("raw-text input needs --gazetteer");
  BootstrapConfig{reps, level, seed}.validate();
  if (!(tail_quantile > 0.0 && tail_quantile < 1.0)) throw ConfigError("tail quantile must be in (0, 1)");
  if (min_total < 1) throw ConfigError("min total mentions must be >= 1");
  if (top_k < 1) throw ConfigError("top-k must be >= 1");
  if (top_fraction.num < 1 || top_fraction.den < 1) throw ConfigError("invalid top fraction");
  for (const auto& w : widths) {
    if (w.months < 1) throw ConfigError("cohort width must be positive");
  }
}

StatsOptions RunConfig::stats_options() const {
  return {BootstrapConfig{reps, level, derive_seed(seed, "bootstrap")}, tail_quantile};
}

std::uint64_t RunConfig::sampler_seed() const { return derive_seed(seed, "sample"); }

RecognizerConfig load_recognizer(const RunConfig& cfg) {
  RecognizerConfig rc;
  if (cfg.gazetteer) rc.given_names = load_word_list(*cfg.gazetteer);
  if (cfg.honorifics) rc.honorifics = load_word_list(*cfg.honorifics);
  if (cfg.stop_words) rc.stop_capitalized = load_word_list(*cfg.stop_words);
  rc.validate();
  return rc;
}

std::vector<Timeline> timelines_from(std::span<const Document> docs, const RecognizerConfig* recognizer) {
  TimelineBuilder builder;
  const bool any_raw = std::any_of(docs.begin(), docs.end(), [](const Document& d) { return d.is_raw(); });
  if (!any_raw) {
    for (const auto& d : docs) {
      for (const auto& m : d.mentions()) builder.add(m.name, d.timestamp, m.count);
    }
    return std::move(builder).build();
  }
  if (!recognizer) throw ConfigError("raw-text documents need a recognizer configuration");
  const auto n = static_cast<std::int64_t>(docs.size());
  std::vector<std::vector<Mention>> per_doc(docs.size());
#pragma omp parallel for schedule(dynamic, 256)
  for (std::int64_t i = 0; i < n; ++i) per_doc[i] = mentions_of(docs[i], *recognizer);
  for (const auto& ms : per_doc) {
    for (const auto& m : ms) builder.add(m);
  }
  return std::move(builder).build();
}

std::string PeriodSet::label() const {
  return fmt::format("{}_{}", to_string(method), to_string(filter));
}

std::vector<PeriodSet> compute_period_sets(std::span<const Timeline> timelines, const RunConfig& cfg) {
  const auto basic = basic_name_filter(timelines, cfg.min_total);
  const auto grid = WeekGrid::for_window(cfg.window);

  const auto counts = yearly_counts(timelines);
  NameSet top_k, top_frac;
  for (const auto f : cfg.filters) {
    if (f == NameFilter::TopK) top_k = top_k_by_year(counts, cfg.top_k);
    if (f == NameFilter::TopFraction) top_frac = top_frac_by_year(counts, cfg.top_fraction);
  }

  std::vector<PeriodSet> out;
  for (const auto method : cfg.methods) {
    auto detected = detect_periods(basic, method, grid);
    for (auto& p : detected) p.duration_days = persisted_duration(p.duration_days);
    const auto kept = period_filter(detected, cfg.window, cfg.min_duration);
    for (const auto filter : cfg.filters) {
      PeriodSet set{method, filter, {}};
      const NameSet* names = filter == NameFilter::TopK ? &top_k
                             : filter == NameFilter::TopFraction ? &top_frac
                                                                 : nullptr;
      for (const auto& p : kept) {
        if (!names || names->contains(p.name)) set.periods.push_back(p);
      }
      out.push_back(std::move(set));
    }
  }
  return out;
}

namespace {

void write_file(const fs::path& out_dir, const fs::path& rel, std::vector<fs::path>& files,
                const std::function<void(std::ostream&)>& body) {
  const fs::path full = out_dir / rel;
  fs::create_directories(full.parent_path());
  files.push_back(rel);
  std::ofstream out(full, std::ios::binary);
  if (!out) throw DataError("cannot write " + full.string());
  body(out);
  if (!out) throw DataError("write failed: " + full.string());
}

std::vector<CohortWidth> widths_with_summary(const RunConfig& cfg) {
  auto widths = cfg.widths;
  if (std::find(widths.begin(), widths.end(), cfg.summary_width) == widths.end()) {
    widths.push_back(cfg.summary_width);
  }
  return widths;
}

void require_nonempty(const PeriodSet& set) {
  if (set.periods.empty()) {
    throw StatsError(StatsErrorCode::EmptyCohort,
                     fmt::format("no fame periods left for ({}, {}, all cohorts)", to_string(set.method),
                                 display_name(set.filter)));
  }
}

}  // namespace

std::vector<SummaryRow> write_period_set_outputs(const PeriodSet& set, const RunConfig& cfg,
                                                 const fs::path& out_dir, std::vector<fs::path>& files) {
  require_nonempty(set);
  const std::string label = set.label();
  write_file(out_dir, "periods_" + label + ".csv", files,
             [&](std::ostream& o) { write_periods(o, set.periods); });

  const auto opts = cfg.stats_options();
  std::vector<SummaryRow> rows;
  for (const auto width : widths_with_summary(cfg)) {
    const bool primary = width == cfg.summary_width;
    const auto summaries = summarize_cohorts(set.periods, width, opts, primary, label);
    write_file(out_dir, fmt::format("quantiles_{}_{}.csv", label, width.label()), files,
               [&](std::ostream& o) { write_quantile_series(o, summaries); });
    if (!primary) continue;
    write_file(out_dir, "fit_" + label + ".json", files, [&](std::ostream& o) { o << fit_json(summaries); });
    for (const auto& s : summaries) {
      write_file(out_dir, fs::path("curves") / fmt::format("{}_{}.csv", label, s.cohort.label()), files,
                 [&](std::ostream& o) { write_curve(o, s); });
      rows.push_back(summary_row(set.method, set.filter, s));
    }
  }
  return rows;
}

std::vector<SummaryRow> summary_from_directory(const fs::path& dir, const RunConfig& cfg) {
  std::vector<SummaryRow> rows;
  const auto opts = cfg.stats_options();
  for (const auto method : cfg.methods) {
    for (const auto filter : cfg.filters) {
      PeriodSet set{method, filter, {}};
      const fs::path path = dir / ("periods_" + set.label() + ".csv");
      std::ifstream in(path);
      if (!in) throw DataError("cannot open " + path.string());
      set.periods = read_periods(in);
      require_nonempty(set);
      for (const auto& s : summarize_cohorts(set.periods, cfg.summary_width, opts, true, set.label())) {
        rows.push_back(summary_row(method, filter, s));
      }
    }
  }
  return rows;
}

std::string sha256_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot read " + path.string());
  std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(), &EVP_MD_CTX_free);
  EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr);
  std::array<char, 1 << 16> buf{};
  while (in) {
    in.read(buf.data(), buf.size());
    if (in.gcount() > 0) EVP_DigestUpdate(ctx.get(), buf.data(), static_cast<std::size_t>(in.gcount()));
  }
  std::array<unsigned char, EVP_MAX_MD_SIZE> md{};
  unsigned int len = 0;
  EVP_DigestFinal_ex(ctx.get(), md.data(), &len);
  std::string hex;
  for (unsigned int i = 0; i < len; ++i) hex += fmt::format("{:02x}", md[i]);
  return hex;
}

namespace {

nlohmann::ordered_json config_json(const RunConfig& cfg) {
  nlohmann::ordered_json j;
  j["window"] = {{"start", cfg.window.start_month().str()}, {"end", cfg.window.end_month().str()}};
  j["sample"] = cfg.sample;
  j["n_min"] = cfg.n_min ? nlohmann::ordered_json(*cfg.n_min) : nlohmann::ordered_json(nullptr);
  j["underfull"] = cfg.underfull == UnderfullPolicy::DropMonth ? "drop-month"
                   : cfg.underfull == UnderfullPolicy::KeepAll ? "keep-all"
                                                               : "fail";
  j["seed"] = cfg.seed;
  j["schema"] = cfg.schema == Schema::RawText ? "raw" : "pre-tagged";
  const auto word_list = [](const std::optional<fs::path>& p) {
    if (!p) return nlohmann::ordered_json(nullptr);
    return nlohmann::ordered_json{{"path", p->string()}, {"sha256", sha256_file(*p)}};
  };
  j["gazetteer"] = word_list(cfg.gazetteer);
  j["honorifics"] = word_list(cfg.honorifics);
  j["stop_words"] = word_list(cfg.stop_words);
  auto methods = nlohmann::ordered_json::array();
  for (const auto m : cfg.methods) methods.push_back(to_string(m));
  j["methods"] = methods;
  auto filters = nlohmann::ordered_json::array();
  for (const auto f : cfg.filters) filters.push_back(to_string(f));
  j["filters"] = filters;
  auto widths = nlohmann::ordered_json::array();
  for (const auto w : cfg.widths) widths.push_back(w.label());
  j["widths"] = widths;
  j["summary_width"] = cfg.summary_width.label();
  j["reps"] = cfg.reps;
  j["level"] = cfg.level;
  j["tail_quantile"] = cfg.tail_quantile;
  j["min_total"] = cfg.min_total;
  j["min_duration"] = cfg.min_duration;
  j["top_k"] = cfg.top_k;
  j["top_fraction"] = fmt::format("{}/{}", cfg.top_fraction.num, cfg.top_fraction.den);
  return j;
}

}  // namespace

RunResult run_pipeline(const RunConfig& cfg, std::span<const fs::path> inputs, const fs::path& out_dir) {
  cfg.validate();
  if (inputs.empty()) throw ConfigError("no input files");
  set_worker_count(cfg.workers);
  fs::create_directories(out_dir);

  RunResult result;
  try {
    std::optional<RecognizerConfig> recognizer;
    if (cfg.schema == Schema::RawText) recognizer = load_recognizer(cfg);

    std::vector<Document> docs;
    auto inputs_json = nlohmann::ordered_json::array();
    for (const auto& path : inputs) {
      ReadStats stats;
      auto part = read_documents(path, cfg.schema, &stats);
      std::move(part.begin(), part.end(), std::back_inserter(docs));
      inputs_json.push_back({{"path", path.string()},
                             {"sha256", sha256_file(path)},
                             {"lines", stats.lines},
                             {"malformed", stats.malformed}});
    }
    docs = window_filter(docs, cfg.window);

    if (cfg.sample) {
      const auto volumes = month_volumes(docs);
      auto sampled = sample_uniform(docs, volumes,
                                    SamplerConfig{*cfg.n_min, cfg.sampler_seed(), cfg.underfull});
      docs = std::move(sampled.kept);
      write_file(out_dir, "sampling.csv", result.files,
                 [&](std::ostream& o) { write_sampling_report(o, sampled.report); });
    }

    const auto timelines = timelines_from(docs, recognizer ? &*recognizer : nullptr);
    docs.clear();
    docs.shrink_to_fit();

    for (const auto& set : compute_period_sets(timelines, cfg)) {
      auto rows = write_period_set_outputs(set, cfg, out_dir, result.files);
      std::move(rows.begin(), rows.end(), std::back_inserter(result.summary));
    }

    write_file(out_dir, "summary.csv", result.files,
               [&](std::ostream& o) { write_summary_csv(o, result.summary); });
    write_file(out_dir, "summary.txt", result.files,
               [&](std::ostream& o) { write_summary_text(o, result.summary); });

    std::sort(result.files.begin(), result.files.end());
    nlohmann::ordered_json manifest;
    manifest["config"] = config_json(cfg);
    manifest["inputs"] = inputs_json;
    auto outputs = nlohmann::ordered_json::array();
    for (const auto& f : result.files) outputs.push_back(f.generic_string());
    manifest["outputs"] = outputs;
    write_file(out_dir, "manifest.json", result.files,
               [&](std::ostream& o) { o << manifest.dump(2) << '\n'; });
    std::sort(result.files.begin(), result.files.end());
  } catch (...) {
    std::error_code ec;
    for (const auto& f : result.files) fs::remove(out_dir / f, ec);
    fs::remove(out_dir / "curves", ec);  // only succeeds when empty
    throw;
  }
  return result;
}

}  // namespace fame
