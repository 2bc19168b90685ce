#include "fame/timeline.hpp"

#include <algorithm>
#include <charconv>
#include <istream>
#include <map>
#include <ostream>

#include "fame/errors.hpp"

namespace fame {

std::int64_t Timeline::total() const {
  std::int64_t n = 0;
  for (const auto& e : events) n += e.multiplicity;
  return n;
}

void normalize(Timeline& t) {
  auto& ev = t.events;
  std::sort(ev.begin(), ev.end(), [](const Event& a, const Event& b) { return a.at < b.at; });
  std::size_t out = 0;
  for (std::size_t i = 0; i < ev.size(); ++i) {
    if (out > 0 && ev[out - 1].at == ev[i].at) {
      ev[out - 1].multiplicity += ev[i].multiplicity;
    } else {
      ev[out++] = ev[i];
    }
  }
  ev.resize(out);
}

void TimelineBuilder::add(const std::string& name, Timestamp at, std::int64_t count) {
  raw_[name].push_back({at, count});
}

void TimelineBuilder::merge(TimelineBuilder&& other) {
  for (auto& [name, events] : other.raw_) {
    auto& mine = raw_[name];
    mine.insert(mine.end(), events.begin(), events.end());
  }
  other.raw_.clear();
}

std::vector<Timeline> TimelineBuilder::build() && {
  std::vector<Timeline> out;
  out.reserve(raw_.size());
  for (auto& [name, events] : raw_) out.push_back({name, std::move(events)});
  raw_.clear();
  std::sort(out.begin(), out.end(),
            [](const Timeline& a, const Timeline& b) { return a.name < b.name; });
  const auto n = static_cast<std::int64_t>(out.size());
#pragma omp parallel for schedule(dynamic, 256)
  for (std::int64_t i = 0; i < n; ++i) normalize(out[i]);
  return out;
}

std::vector<Timeline> build_timelines(std::span<const Mention> mentions) {
  TimelineBuilder b;
  for (const auto& m : mentions) b.add(m);
  return std::move(b).build();
}

std::vector<YearlyCount> yearly_counts(std::span<const Timeline> timelines) {
  std::vector<YearlyCount> out;
  for (const auto& t : timelines) {
    std::map<int, std::int64_t> per_year;
    for (const auto& e : t.events) per_year[year_of(e.at)] += e.multiplicity;
    for (const auto& [year, n] : per_year) out.push_back({t.name, year, n});
  }
  return out;
}

std::vector<Timeline> basic_name_filter(std::span<const Timeline> timelines,
                                        std::int64_t min_total) {
  std::vector<Timeline> out;
  for (const auto& t : timelines) {
    if (t.total() >= min_total) out.push_back(t);
  }
  return out;
}

namespace {

// Calls take(year, ranked) for every year, `ranked` sorted by descending
// count then ascending name.
template <typename Take>
NameSet rank_by_year(std::span<const YearlyCount> counts, Take take) {
  std::map<int, std::vector<const YearlyCount*>> by_year;
  for (const auto& c : counts) by_year[c.year].push_back(&c);
  NameSet out;
  for (auto& [year, rows] : by_year) {
    std::sort(rows.begin(), rows.end(), [](const YearlyCount* a, const YearlyCount* b) {
      if (a->count != b->count) return a->count > b->count;
      return a->name < b->name;
    });
    const auto n = std::min<std::size_t>(rows.size(), take(rows.size()));
    for (std::size_t i = 0; i < n; ++i) out.insert(rows[i]->name);
  }
  return out;
}

}  // namespace

NameSet top_k_by_year(std::span<const YearlyCount> counts, std::int64_t k) {
  const auto cap = static_cast<std::size_t>(std::max<std::int64_t>(k, 0));
  return rank_by_year(counts, [cap](std::size_t) { return cap; });
}

NameSet top_frac_by_year(std::span<const YearlyCount> counts, Fraction fraction) {
  if (fraction.num < 0 || fraction.den <= 0) throw ConfigError("invalid top fraction");
  return rank_by_year(counts, [fraction](std::size_t n_y) {
    const auto scaled = static_cast<std::int64_t>(n_y) * fraction.num;
    return static_cast<std::size_t>((scaled + fraction.den - 1) / fraction.den);
  });
}

std::vector<Timeline> restrict_to(std::span<const Timeline> timelines, const NameSet& names) {
  std::vector<Timeline> out;
  for (const auto& t : timelines) {
    if (names.contains(t.name)) out.push_back(t);
  }
  return out;
}

void write_timelines(std::ostream& out, std::span<const Timeline> timelines) {
  std::vector<const Timeline*> sorted;
  for (const auto& t : timelines) sorted.push_back(&t);
  std::sort(sorted.begin(), sorted.end(),
            [](const Timeline* a, const Timeline* b) { return a->name < b->name; });
  for (const auto* t : sorted) {
    for (const auto& e : t->events) {
      out << t->name << '\t' << format_timestamp(e.at) << '\t' << e.multiplicity << '\n';
    }
  }
}

std::vector<Timeline> read_timelines(std::istream& in) {
  TimelineBuilder b;
  std::string line;
  std::int64_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    const auto t1 = line.find('\t');
    const auto t2 = t1 == std::string::npos ? t1 : line.find('\t', t1 + 1);
    if (t2 == std::string::npos) throw DataError("timeline TSV line " + std::to_string(lineno));
    const auto ts = parse_timestamp(std::string_view(line).substr(t1 + 1, t2 - t1 - 1));
    std::int64_t mult = 0;
    const char* first = line.data() + t2 + 1;
    const char* last = line.data() + line.size();
    const auto [ptr, ec] = std::from_chars(first, last, mult);
    if (!ts || ec != std::errc{} || ptr != last || mult < 1) {
      throw DataError("timeline TSV line " + std::to_string(lineno));
    }
    b.add(line.substr(0, t1), ts->at, mult);
  }
  return std::move(b).build();
}

}  // namespace fame
