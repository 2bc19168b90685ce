#pragma once

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "fame/time.hpp"
#include "fame/timeline.hpp"

namespace fame::testing {

inline Date ymd(int y, unsigned m, unsigned d) {
  return Date{std::chrono::year{y} / std::chrono::month{m} / std::chrono::day{d}};
}

/// 1900-01-01 was a Monday; handy as a week-grid origin.
inline Date base_monday() { return ymd(1900, 1, 1); }

inline Timestamp day(std::int64_t n, std::int64_t seconds = 0) {
  return midnight(base_monday() + std::chrono::days{n}) + std::chrono::seconds{seconds};
}

/// Timeline from (day offset, multiplicity) pairs relative to base_monday().
inline Timeline timeline_of(const std::string& name,
                            const std::vector<std::pair<std::int64_t, std::int64_t>>& events) {
  Timeline t{name, {}};
  for (const auto& [d, m] : events) t.events.push_back({day(d), m});
  normalize(t);
  return t;
}

/// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    std::random_device rd;
    path_ = std::filesystem::temp_directory_path() /
            ("fame_" + tag + "_" + std::to_string(rd()) + std::to_string(rd()));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  [[nodiscard]] const std::filesystem::path& path() const { return path_; }
  [[nodiscard]] std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

}  // namespace fame::testing
