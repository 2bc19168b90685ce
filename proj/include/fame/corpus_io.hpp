#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "fame/time.hpp"

namespace fame {

struct NameCount {
  std::string name;
  std::int64_t count = 1;

  friend bool operator==(const NameCount&, const NameCount&) = default;
};

using MentionList = std::vector<NameCount>;

/// One dated corpus item. The body is either raw text or a list of
/// externally extracted mentions, never both.
struct Document {
  std::string id;
  Timestamp timestamp;
  bool has_time = false;
  std::variant<std::string, MentionList> body;

  [[nodiscard]] bool is_raw() const { return std::holds_alternative<std::string>(body); }
  [[nodiscard]] const std::string& text() const { return std::get<std::string>(body); }
  [[nodiscard]] const MentionList& mentions() const { return std::get<MentionList>(body); }

  friend bool operator==(const Document&, const Document&) = default;
};

enum class Schema { RawText, PreTagged };

struct ReadStats {
  std::int64_t lines = 0;
  std::int64_t parsed = 0;
  std::int64_t malformed = 0;
};

/// Maximum tolerated fraction of malformed lines before the read is fatal.
inline constexpr double kMaxMalformedFraction = 0.10;

/// Parses one record. Pre-tagged lines may be JSON objects or
/// `date<TAB>name<TAB>count`; TSV rows get `fallback_id` as their id.
[[nodiscard]] std::optional<Document> parse_document_line(std::string_view line, Schema schema,
                                                          const std::string& fallback_id);

/// Streams documents from a line-oriented file in file order. Malformed lines
/// are skipped and counted; `finish()` raises DataError when more than 10% of
/// the lines were malformed.
class DocumentReader {
 public:
  DocumentReader(const std::filesystem::path& path, Schema schema);

  [[nodiscard]] std::optional<Document> next();
  [[nodiscard]] const ReadStats& stats() const { return stats_; }
  void finish() const;

 private:
  std::filesystem::path path_;
  std::string basename_;
  Schema schema_;
  std::ifstream in_;
  ReadStats stats_;
};

/// Reads a whole file, applying `finish()` at the end.
std::vector<Document> read_documents(const std::filesystem::path& path, Schema schema,
                                     ReadStats* stats = nullptr);

/// Serializes one document as a single JSON line (no trailing newline).
[[nodiscard]] std::string to_json_line(const Document& doc);
void write_documents(std::ostream& out, std::span<const Document> docs);
void write_documents(const std::filesystem::path& path, std::span<const Document> docs);

/// Keeps documents with start <= timestamp < end, order preserved.
[[nodiscard]] std::vector<Document> window_filter(std::span<const Document> docs,
                                                  const AnalysisWindow& window);

}  // namespace fame
