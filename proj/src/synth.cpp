#include "fame/synth.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <random>
#include <sstream>

#include <fmt/format.h>

#include "fame/errors.hpp"
#include "fame/hashing.hpp"
#include "json.hpp"

namespace fame::synth {

namespace chr = std::chrono;
using nlohmann::json;

double NameProfile::probability_on(Date d) const {
  for (const auto& s : segments) {
    if (d >= s.start && d < s.end) return s.p;
  }
  return 0.0;
}

std::int64_t VolumeSchedule::articles_on(Date d) const {
  for (const auto& s : segments) {
    if (d >= s.start && d < s.end) return s.per_day;
  }
  return 0;
}

namespace {

template <typename Segment>
void check_disjoint(std::vector<Segment> segs, const std::string& what) {
  std::sort(segs.begin(), segs.end(), [](const auto& a, const auto& b) { return a.start < b.start; });
  for (std::size_t i = 0; i < segs.size(); ++i) {
    if (!(segs[i].start < segs[i].end)) throw ConfigError(what + ": empty or inverted segment");
    if (i > 0 && segs[i].start < segs[i - 1].end) throw ConfigError(what + ": overlapping segments");
  }
}

Date date_field(const json& j, const char* key) {
  if (!j.contains(key) || !j[key].is_string()) {
    throw ConfigError(std::string("synth spec: missing date field '") + key + "'");
  }
  const auto d = parse_date(j[key].get<std::string>());
  if (!d) throw ConfigError("synth spec: bad date '" + j[key].get<std::string>() + "'");
  return *d;
}

YearMonth month_field(const json& j, const char* key) {
  if (!j.contains(key) || !j[key].is_string()) {
    throw ConfigError(std::string("synth spec: missing window field '") + key + "'");
  }
  const auto m = parse_year_month(j[key].get<std::string>());
  if (!m) throw ConfigError("synth spec: bad month '" + j[key].get<std::string>() + "'");
  return *m;
}

}  // namespace

void SynthSpec::validate() const {
  const Date lo = window.start();
  const Date hi = window.end();
  for (const auto& p : profiles) {
    for (const auto& s : p.segments) {
      if (!(s.p >= 0.0 && s.p <= 1.0)) throw ConfigError("profile " + p.name + ": p outside [0, 1]");
      if (s.start < lo || s.end > hi) throw ConfigError("profile " + p.name + ": segment outside window");
    }
    check_disjoint(p.segments, "profile " + p.name);
  }
  for (const auto& s : volume.segments) {
    if (s.per_day < 0) throw ConfigError("volume: negative article count");
  }
  check_disjoint(volume.segments, "volume");
}

SynthSpec parse_spec(const std::string& json_text) {
  const json j = json::parse(json_text, nullptr, /*allow_exceptions=*/false);
  if (!j.is_object()) throw ConfigError("synth spec is not a JSON object");
  try {
    const auto& w = j.at("window");
    SynthSpec spec{{}, {}, AnalysisWindow(month_field(w, "start"), month_field(w, "end")),
                   j.value("seed", std::uint64_t{0})};
    for (const auto& v : j.at("volume")) {
      spec.volume.segments.push_back(
          {date_field(v, "start"), date_field(v, "end"), v.at("per_day").get<std::int64_t>()});
    }
    for (const auto& p : j.at("profiles")) {
      NameProfile profile{p.at("name").get<std::string>(), {}};
      for (const auto& s : p.at("segments")) {
        profile.segments.push_back({date_field(s, "start"), date_field(s, "end"), s.at("p").get<double>()});
      }
      spec.profiles.push_back(std::move(profile));
    }
    spec.validate();
    return spec;
  } catch (const json::exception& e) {
    throw ConfigError(std::string("synth spec: ") + e.what());
  }
}

SynthSpec load_spec(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open synth spec: " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_spec(buf.str());
}

std::vector<Document> generate_corpus(const SynthSpec& spec, Execution exec) {
  spec.validate();
  const Date first = spec.window.start();
  const auto n_days = (spec.window.end() - first).count();

  std::vector<std::int64_t> volume(static_cast<std::size_t>(n_days), 0);
  for (const auto& s : spec.volume.segments) {
    const auto a = std::max<std::int64_t>((s.start - first).count(), 0);
    const auto b = std::min<std::int64_t>((s.end - first).count(), n_days);
    for (auto d = a; d < b; ++d) volume[d] = s.per_day;
  }

  struct Active {
    std::uint32_t profile;
    double p;
  };
  std::vector<std::vector<Active>> active(static_cast<std::size_t>(n_days));
  for (std::uint32_t i = 0; i < spec.profiles.size(); ++i) {
    for (const auto& s : spec.profiles[i].segments) {
      if (s.p <= 0.0) continue;
      for (auto d = (s.start - first).count(); d < (s.end - first).count(); ++d) {
        active[d].push_back({i, s.p});
      }
    }
  }
  // Segments were appended profile by profile, so each day's list is
  // already in profile order.

  std::vector<std::vector<Document>> per_day(static_cast<std::size_t>(n_days));
  const auto make_day = [&](std::int64_t d) {
    const Date day = first + chr::days{d};
    const auto n = volume[d];
    std::vector<std::vector<std::uint32_t>> names(static_cast<std::size_t>(n));
    std::mt19937_64 rng(combine_seed(spec.seed, static_cast<std::uint64_t>(day.time_since_epoch().count())));
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (const auto& a : active[d]) {
      if (a.p >= 1.0) {
        for (auto& doc : names) doc.push_back(a.profile);
        continue;
      }
      // Geometric skipping over Bernoulli(p) trials.
      const double log_q = std::log1p(-a.p);
      std::int64_t pos = -1;
      while (true) {
        const double u = 1.0 - unit(rng);  // (0, 1]
        pos += static_cast<std::int64_t>(std::floor(std::log(u) / log_q)) + 1;
        if (pos >= n) break;
        names[pos].push_back(a.profile);
      }
    }
    const std::string date = format_date(day);
    auto& out = per_day[d];
    out.reserve(static_cast<std::size_t>(n));
    for (std::int64_t k = 0; k < n; ++k) {
      MentionList mentions;
      mentions.reserve(names[k].size());
      for (const auto i : names[k]) mentions.push_back({spec.profiles[i].name, 1});
      out.push_back(Document{fmt::format("{}#{}", date, k), midnight(day), false, std::move(mentions)});
    }
  };

  if (exec == Execution::Parallel) {
#pragma omp parallel for schedule(dynamic, 16)
    for (std::int64_t d = 0; d < n_days; ++d) make_day(d);
  } else {
    for (std::int64_t d = 0; d < n_days; ++d) make_day(d);
  }

  std::vector<Document> docs;
  std::size_t total = 0;
  for (const auto& v : per_day) total += v.size();
  docs.reserve(total);
  for (auto& v : per_day) std::move(v.begin(), v.end(), std::back_inserter(docs));
  return docs;
}

FamePeriod oracle_spike(const Timeline& t, const WeekGrid& grid) {
  std::int64_t wmin = grid.week_of(t.events.front().at);
  std::int64_t wmax = wmin;
  for (const auto& e : t.events) {
    wmin = std::min(wmin, grid.week_of(e.at));
    wmax = std::max(wmax, grid.week_of(e.at));
  }
  const auto n_weeks = static_cast<std::size_t>(wmax - wmin + 1);
  std::vector<std::int64_t> count(n_weeks, 0);
  for (std::size_t w = 0; w < n_weeks; ++w) {
    for (const auto& e : t.events) {
      if (grid.week_of(e.at) == wmin + static_cast<std::int64_t>(w)) count[w] += e.multiplicity;
    }
  }
  const std::int64_t max_count = *std::max_element(count.begin(), count.end());
  std::size_t peak = 0;
  while (count[peak] != max_count) ++peak;

  // weak_before[w] = number of weeks in [0, w) below a tenth of the maximum.
  std::vector<std::size_t> weak_before(n_weeks + 1, 0);
  for (std::size_t w = 0; w < n_weeks; ++w) {
    const bool weak = static_cast<double>(count[w]) < static_cast<double>(max_count) / 10.0;
    weak_before[w + 1] = weak_before[w] + (weak ? 1 : 0);
  }
  std::size_t best_a = peak, best_b = peak;
  for (std::size_t a = 0; a <= peak; ++a) {
    for (std::size_t b = peak; b < n_weeks; ++b) {
      if (weak_before[b + 1] - weak_before[a] != 0) continue;
      if (b - a > best_b - best_a) {
        best_a = a;
        best_b = b;
      }
    }
  }
  const auto week = [&](std::size_t w) { return wmin + static_cast<std::int64_t>(w); };
  return FamePeriod{t.name,
                    Method::Spike,
                    midnight(grid.week_start(week(best_a))),
                    midnight(grid.week_start(week(best_b) + 1)),
                    grid.week_start(week(peak)),
                    static_cast<double>(7 * (best_b - best_a + 1))};
}

FamePeriod oracle_continuity(const Timeline& t) {
  std::vector<Timestamp> times;
  for (const auto& e : t.events) times.push_back(e.at);
  std::sort(times.begin(), times.end());
  times.erase(std::unique(times.begin(), times.end()), times.end());
  const std::size_t n = times.size();
  const chr::seconds week{7 * kSecondsPerDay};

  // A mention-free seven-day window opens right after times[k] unless some
  // mention lands in (times[k], times[k] + 7 days].
  std::vector<bool> covered(n, false);
  for (std::size_t k = 0; k < n; ++k) {
    for (const auto& e : t.events) {
      if (e.at > times[k] && e.at <= times[k] + week) covered[k] = true;
    }
  }

  std::size_t best_i = 0, best_j = 0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i; j < n; ++j) {
      // Range [i, j] is valid iff covered[i..j-1] all hold.
      if (j > i && !covered[j - 1]) break;
      const auto span = times[j] - times[i];
      const auto best = times[best_j] - times[best_i];
      if (span > best || (span == best && times[i] < times[best_i])) {
        best_i = i;
        best_j = j;
      }
    }
  }
  const double duration = days_between(times[best_i], times[best_j]);
  return FamePeriod{t.name,
                    Method::Continuity,
                    times[best_i],
                    times[best_j],
                    day_of(times[best_i]) + chr::days{static_cast<std::int64_t>(std::floor(duration / 2.0))},
                    duration};
}

}  // namespace fame::synth
