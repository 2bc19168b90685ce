#pragma once

#include <stdexcept>
#include <string>

namespace fame {

enum class ErrorKind { Config, Data, Statistics };

/// Process exit status for an error kind: 2 config, 3 data, 4 statistics.
[[nodiscard]] constexpr int exit_code(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Config: return 2;
    case ErrorKind::Data: return 3;
    case ErrorKind::Statistics: return 4;
  }
  return 1;
}

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  [[nodiscard]] ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

class ConfigError : public Error {
 public:
  explicit ConfigError(const std::string& what) : Error(ErrorKind::Config, what) {}
};

class DataError : public Error {
 public:
  explicit DataError(const std::string& what) : Error(ErrorKind::Data, what) {}
};

enum class StatsErrorCode { EmptyCohort, DegenerateTail, InsufficientTail, UnstableStatistic };

[[nodiscard]] constexpr const char* to_string(StatsErrorCode code) {
  switch (code) {
    case StatsErrorCode::EmptyCohort: return "EmptyCohort";
    case StatsErrorCode::DegenerateTail: return "DegenerateTail";
    case StatsErrorCode::InsufficientTail: return "InsufficientTail";
    case StatsErrorCode::UnstableStatistic: return "UnstableStatistic";
  }
  return "?";
}

class StatsError : public Error {
 public:
  StatsError(StatsErrorCode code, const std::string& detail)
      : Error(ErrorKind::Statistics, std::string(to_string(code)) + ": " + detail), code_(code) {}
  [[nodiscard]] StatsErrorCode code() const { return code_; }

 private:
  StatsErrorCode code_;
};

}  // namespace fame
