#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "fame/corpus_io.hpp"
#include "fame/time.hpp"

namespace fame {

using WordSet = std::unordered_set<std::string>;

/// Knobs for the heuristic personal-name recognizer.
struct RecognizerConfig {
  WordSet given_names;       // gazetteer of first names
  WordSet honorifics;        // "Mr.", "Mrs.", "Dr." ...
  WordSet stop_capitalized;  // sentence-initial false positives: "The", "On" ...
  int min_phrase_tokens = 2;
  int max_phrase_tokens = 4;

  /// Throws ConfigError when the invariants do not hold.
  void validate() const;
};

/// One line per entry, UTF-8; blank lines and surrounding whitespace ignored.
[[nodiscard]] WordSet load_word_list(const std::filesystem::path& path);

struct Mention {
  std::string name;
  Timestamp timestamp;
  std::int64_t count = 1;

  friend bool operator==(const Mention&, const Mention&) = default;
};

/// Accepted names in `text`, one entry per distinct name, ordered by first
/// occurrence, each with its occurrence count.
[[nodiscard]] MentionList extract_names(std::string_view text, const RecognizerConfig& cfg);

/// Runs the recognizer over a raw-text document. Pre-tagged documents are
/// rejected with std::invalid_argument; use mentions_of for dispatch.
[[nodiscard]] std::vector<Mention> extract_mentions(const Document& doc, const RecognizerConfig& cfg);

/// Recognizer output for raw documents, stored mentions for pre-tagged ones.
[[nodiscard]] std::vector<Mention> mentions_of(const Document& doc, const RecognizerConfig& cfg);

/// Converts raw documents to pre-tagged ones; pre-tagged input passes through.
[[nodiscard]] Document to_pre_tagged(const Document& doc, const RecognizerConfig& cfg);

}  // namespace fame
