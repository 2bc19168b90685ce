#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "fame/corpus_io.hpp"
#include "fame/parallel.hpp"
#include "fame/peaks.hpp"
#include "fame/time.hpp"
#include "fame/timeline.hpp"

namespace fame::synth {

/// f(t) = p for start <= t < end.
struct ProbabilitySegment {
  Date start;
  Date end;
  double p = 0.0;
};

/// A name's true per-article mention probability over time; zero outside
/// its segments.
struct NameProfile {
  std::string name;
  std::vector<ProbabilitySegment> segments;

  [[nodiscard]] double probability_on(Date d) const;
};

/// n(t) = per_day articles for start <= t < end.
struct VolumeSegment {
  Date start;
  Date end;
  std::int64_t per_day = 0;
};

struct VolumeSchedule {
  std::vector<VolumeSegment> segments;

  [[nodiscard]] std::int64_t articles_on(Date d) const;
};

struct SynthSpec {
  std::vector<NameProfile> profiles;
  VolumeSchedule volume;
  AnalysisWindow window{{1900, 1}, {1901, 1}};
  std::uint64_t seed = 0;

  /// Throws ConfigError on p outside [0, 1], overlapping or inverted
  /// segments, negative volumes, or profile segments outside the window.
  void validate() const;
};

/// JSON schema:
///   {"seed": 7,
///    "window": {"start": "1900-01", "end": "1901-01"},
///    "volume": [{"start": "1900-01-01", "end": "1901-01-01", "per_day": 40}],
///    "profiles": [{"name": "Ada Lovelace",
///                  "segments": [{"start": "1900-02-01", "end": "1900-04-01", "p": 0.01}]}]}
/// Segment ends are exclusive.
[[nodiscard]] SynthSpec load_spec(const std::filesystem::path& path);
[[nodiscard]] SynthSpec parse_spec(const std::string& json_text);

/// Each day t in the window gets n(t) pre-tagged documents; each document
/// mentions each name independently with probability f(t), count 1.
/// Documents come out in (day, index) order with ids "YYYY-MM-DD#k".
/// Deterministic under the spec's seed and independent of worker count.
[[nodiscard]] std::vector<Document> generate_corpus(const SynthSpec& spec,
                                                    Execution exec = Execution::Parallel);

/// Reference spike detector: weekly counts by scanning every event per week,
/// then every contiguous week range around the peak is checked.
[[nodiscard]] FamePeriod oracle_spike(const Timeline& t, const WeekGrid& grid);

/// Reference continuity detector: every event-index range is tested for a
/// seven-day window free of mentions by scanning all events.
[[nodiscard]] FamePeriod oracle_continuity(const Timeline& t);

}  // namespace fame::synth
