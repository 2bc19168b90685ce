#include "fame/name_extract.hpp"

#include <algorithm>
#include <fstream>
#include <stdexcept>
#include <unordered_map>

#include "fame/errors.hpp"

namespace fame {

namespace {

struct Token {
  std::string core;
  bool capitalized = false;
  bool honorific = false;
  bool break_before = false;  // leading punctuation opens a new phrase
  bool break_after = false;   // trailing punctuation closes the phrase
};

bool is_space(char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v'; }

bool is_letter(char c) {
  const auto u = static_cast<unsigned char>(c);
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || u >= 0x80;
}

bool is_joiner(char c) { return c == '\'' || c == '-'; }

bool is_capitalized(std::string_view w) {
  if (w.empty() || w.front() < 'A' || w.front() > 'Z') return false;
  for (std::size_t i = 1; i < w.size(); ++i) {
    if (is_letter(w[i])) continue;
    if (is_joiner(w[i]) && i + 1 < w.size() && is_letter(w[i + 1])) continue;
    return false;
  }
  return true;
}

std::vector<Token> tokenize(std::string_view text, const RecognizerConfig& cfg) {
  std::vector<Token> out;
  std::size_t pos = 0;
  while (pos < text.size()) {
    while (pos < text.size() && is_space(text[pos])) ++pos;
    const std::size_t start = pos;
    while (pos < text.size() && !is_space(text[pos])) ++pos;
    if (start == pos) break;
    std::string_view raw = text.substr(start, pos - start);

    Token tok;
    while (!raw.empty() && !is_letter(raw.front())) {
      raw.remove_prefix(1);
      tok.break_before = true;
    }
    const std::string_view with_trailing = raw;
    while (!raw.empty() && !is_letter(raw.back())) {
      raw.remove_suffix(1);
      tok.break_after = true;
    }
    if (raw.size() > 2 && raw.ends_with("'s")) {
      raw.remove_suffix(2);
      tok.break_after = true;
    }
    tok.core = std::string(raw);
    tok.honorific = !tok.core.empty() && (cfg.honorifics.contains(std::string(with_trailing)) ||
                                          cfg.honorifics.contains(tok.core) ||
                                          cfg.honorifics.contains(tok.core + "."));
    tok.capitalized = !tok.honorific && is_capitalized(tok.core);
    out.push_back(std::move(tok));
  }
  return out;
}

// Length of the longest phrase starting at i made of consecutive capitalized
// tokens not separated by punctuation, capped at `cap`.
int run_length(const std::vector<Token>& toks, std::size_t i, int cap) {
  int n = 0;
  for (std::size_t j = i; j < toks.size() && n < cap; ++j) {
    if (!toks[j].capitalized) break;
    if (j > i && (toks[j].break_before || toks[j - 1].break_after)) break;
    ++n;
  }
  return n;
}

}  // namespace

void RecognizerConfig::validate() const {
  if (min_phrase_tokens < 2) throw ConfigError("min_phrase_tokens must be >= 2");
  if (max_phrase_tokens < min_phrase_tokens) {
    throw ConfigError("max_phrase_tokens must be >= min_phrase_tokens");
  }
  if (given_names.empty()) throw ConfigError("the given-name gazetteer is empty");
}

WordSet load_word_list(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open word list: " + path.string());
  WordSet words;
  std::string line;
  while (std::getline(in, line)) {
    const auto b = line.find_first_not_of(" \t\r");
    if (b == std::string::npos) continue;
    const auto e = line.find_last_not_of(" \t\r");
    words.insert(line.substr(b, e - b + 1));
  }
  return words;
}

MentionList extract_names(std::string_view text, const RecognizerConfig& cfg) {
  const auto toks = tokenize(text, cfg);
  MentionList out;
  std::unordered_map<std::string, std::size_t> slot;

  std::size_t i = 0;
  while (i < toks.size()) {
    const int len = run_length(toks, i, cfg.max_phrase_tokens);
    if (len < cfg.min_phrase_tokens || cfg.stop_capitalized.contains(toks[i].core)) {
      ++i;
      continue;
    }
    const bool after_honorific = i > 0 && toks[i - 1].honorific && !toks[i].break_before;
    if (!after_honorific && !cfg.given_names.contains(toks[i].core)) {
      ++i;
      continue;
    }
    std::string name = toks[i].core;
    for (int k = 1; k < len; ++k) {
      name += ' ';
      name += toks[i + k].core;
    }
    const auto [it, inserted] = slot.try_emplace(name, out.size());
    if (inserted) {
      out.push_back({std::move(name), 1});
    } else {
      ++out[it->second].count;
    }
    i += static_cast<std::size_t>(len);
  }
  return out;
}

std::vector<Mention> extract_mentions(const Document& doc, const RecognizerConfig& cfg) {
  if (!doc.is_raw()) throw std::invalid_argument("extract_mentions needs a raw-text document");
  std::vector<Mention> out;
  for (auto& nc : extract_names(doc.text(), cfg)) {
    out.push_back({std::move(nc.name), doc.timestamp, nc.count});
  }
  return out;
}

std::vector<Mention> mentions_of(const Document& doc, const RecognizerConfig& cfg) {
  if (doc.is_raw()) return extract_mentions(doc, cfg);
  std::vector<Mention> out;
  out.reserve(doc.mentions().size());
  for (const auto& nc : doc.mentions()) out.push_back({nc.name, doc.timestamp, nc.count});
  return out;
}

Document to_pre_tagged(const Document& doc, const RecognizerConfig& cfg) {
  if (!doc.is_raw()) return doc;
  return Document{doc.id, doc.timestamp, doc.has_time, extract_names(doc.text(), cfg)};
}

}  // namespace fame
