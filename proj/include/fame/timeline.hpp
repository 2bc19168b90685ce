#pragma once

#include <cstdint>
#include <iosfwd>
#include <set>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "fame/name_extract.hpp"
#include "fame/time.hpp"

namespace fame {

struct Event {
  Timestamp at;
  std::int64_t multiplicity = 1;

  friend bool operator==(const Event&, const Event&) = default;
};

/// A name's dated mentions: events sorted by time, one entry per distinct
/// timestamp.
struct Timeline {
  std::string name;
  std::vector<Event> events;

  [[nodiscard]] std::int64_t total() const;
  [[nodiscard]] bool empty() const { return events.empty(); }

  friend bool operator==(const Timeline&, const Timeline&) = default;
};

/// Accumulates mentions into timelines. Merging builders is commutative and
/// associative, so partitions of a corpus can be aggregated independently.
class TimelineBuilder {
 public:
  void add(const std::string& name, Timestamp at, std::int64_t count);
  void add(const Mention& m) { add(m.name, m.timestamp, m.count); }
  void merge(TimelineBuilder&& other);

  /// Timelines sorted by name.
  [[nodiscard]] std::vector<Timeline> build() &&;

 private:
  std::unordered_map<std::string, std::vector<Event>> raw_;
};

[[nodiscard]] std::vector<Timeline> build_timelines(std::span<const Mention> mentions);

/// Sorts events and sums multiplicities of equal timestamps.
void normalize(Timeline& t);

struct YearlyCount {
  std::string name;
  int year = 0;
  std::int64_t count = 0;

  friend bool operator==(const YearlyCount&, const YearlyCount&) = default;
};

[[nodiscard]] std::vector<YearlyCount> yearly_counts(std::span<const Timeline> timelines);

using NameSet = std::set<std::string>;

/// Keeps timelines whose total multiplicity is at least `min_total`.
[[nodiscard]] std::vector<Timeline> basic_name_filter(std::span<const Timeline> timelines,
                                                      std::int64_t min_total = 10);

/// Union over years of that year's `k` most mentioned names (ties go to the
/// lexicographically smaller name).
[[nodiscard]] NameSet top_k_by_year(std::span<const YearlyCount> counts, std::int64_t k = 1000);

struct Fraction {
  std::int64_t num = 1;
  std::int64_t den = 1000;
};

/// Union over years of the top ceil(n_y * fraction) names, n_y being the
/// number of distinct names in year y.
[[nodiscard]] NameSet top_frac_by_year(std::span<const YearlyCount> counts,
                                       Fraction fraction = {1, 1000});

[[nodiscard]] std::vector<Timeline> restrict_to(std::span<const Timeline> timelines,
                                                const NameSet& names);

/// TSV `name<TAB>timestamp<TAB>multiplicity`, sorted by (name, timestamp).
void write_timelines(std::ostream& out, std::span<const Timeline> timelines);
[[nodiscard]] std::vector<Timeline> read_timelines(std::istream& in);

}  // namespace fame
