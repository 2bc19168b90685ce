#include "fame/corpus_io.hpp"

#include <algorithm>
#include <charconv>
#include <ostream>

#include "fame/errors.hpp"
#include "json.hpp"

namespace fame {

using nlohmann::json;

namespace {

std::optional<std::int64_t> parse_count(std::string_view s) {
  std::int64_t v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size() || v < 1) return std::nullopt;
  return v;
}

std::optional<Document> parse_tsv(std::string_view line, const std::string& fallback_id) {
  const auto tab1 = line.find('\t');
  if (tab1 == std::string_view::npos) return std::nullopt;
  const auto tab2 = line.find('\t', tab1 + 1);
  if (tab2 == std::string_view::npos) return std::nullopt;
  std::string_view count_field = line.substr(tab2 + 1);
  if (!count_field.empty() && count_field.back() == '\r') count_field.remove_suffix(1);

  const auto ts = parse_timestamp(line.substr(0, tab1));
  const auto count = parse_count(count_field);
  const std::string_view name = line.substr(tab1 + 1, tab2 - tab1 - 1);
  if (!ts || !count || name.empty()) return std::nullopt;
  return Document{fallback_id, ts->at, ts->has_time, MentionList{{std::string(name), *count}}};
}

std::optional<MentionList> parse_mentions(const json& arr) {
  if (!arr.is_array()) return std::nullopt;
  MentionList out;
  out.reserve(arr.size());
  for (const auto& item : arr) {
    if (!item.is_array() || item.size() != 2 || !item[0].is_string() ||
        !item[1].is_number_integer()) {
      return std::nullopt;
    }
    const auto count = item[1].get<std::int64_t>();
    auto name = item[0].get<std::string>();
    if (count < 1 || name.empty()) return std::nullopt;
    out.push_back({std::move(name), count});
  }
  return out;
}

std::optional<Document> parse_json(std::string_view line, Schema schema) {
  const json j = json::parse(line, nullptr, /*allow_exceptions=*/false);
  if (!j.is_object()) return std::nullopt;
  const auto id = j.find("id");
  const auto date = j.find("date");
  if (id == j.end() || !id->is_string() || date == j.end() || !date->is_string()) {
    return std::nullopt;
  }
  const auto ts = parse_timestamp(date->get_ref<const std::string&>());
  if (!ts) return std::nullopt;

  const auto text = j.find("text");
  const auto mentions = j.find("mentions");
  const bool has_text = text != j.end();
  const bool has_mentions = mentions != j.end();
  if (has_text == has_mentions) return std::nullopt;

  Document doc{id->get<std::string>(), ts->at, ts->has_time, std::string{}};
  if (schema == Schema::RawText) {
    if (!has_text || !text->is_string()) return std::nullopt;
    doc.body = text->get<std::string>();
  } else {
    if (!has_mentions) return std::nullopt;
    auto list = parse_mentions(*mentions);
    if (!list) return std::nullopt;
    doc.body = std::move(*list);
  }
  return doc;
}

}  // namespace

std::optional<Document> parse_document_line(std::string_view line, Schema schema,
                                            const std::string& fallback_id) {
  const auto first = line.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return std::nullopt;
  if (line[first] == '{') return parse_json(line, schema);
  if (schema == Schema::PreTagged) return parse_tsv(line, fallback_id);
  return std::nullopt;
}

DocumentReader::DocumentReader(const std::filesystem::path& path, Schema schema)
    : path_(path), basename_(path.filename().string()), schema_(schema), in_(path) {
  if (!in_) throw DataError("cannot open input file: " + path.string());
}

std::optional<Document> DocumentReader::next() {
  std::string line;
  while (std::getline(in_, line)) {
    ++stats_.lines;
    auto doc = parse_document_line(line, schema_, basename_ + ":" + std::to_string(stats_.lines));
    if (doc) {
      ++stats_.parsed;
      return doc;
    }
    ++stats_.malformed;
  }
  if (in_.bad()) throw DataError("I/O error while reading " + path_.string());
  return std::nullopt;
}

void DocumentReader::finish() const {
  if (stats_.lines > 0 &&
      static_cast<double>(stats_.malformed) > kMaxMalformedFraction * static_cast<double>(stats_.lines)) {
    throw DataError(path_.string() + ": " + std::to_string(stats_.malformed) + " of " +
                    std::to_string(stats_.lines) +
                    " lines malformed; the declared input schema is probably wrong");
  }
}

std::vector<Document> read_documents(const std::filesystem::path& path, Schema schema,
                                     ReadStats* stats) {
  DocumentReader reader(path, schema);
  std::vector<Document> docs;
  while (auto doc = reader.next()) docs.push_back(std::move(*doc));
  if (stats) *stats = reader.stats();
  reader.finish();
  return docs;
}

std::string to_json_line(const Document& doc) {
  nlohmann::ordered_json j;
  j["id"] = doc.id;
  j["date"] = doc.has_time ? format_datetime(doc.timestamp) : format_date(day_of(doc.timestamp));
  if (doc.is_raw()) {
    j["text"] = doc.text();
  } else {
    auto arr = nlohmann::ordered_json::array();
    for (const auto& m : doc.mentions()) arr.push_back({m.name, m.count});
    j["mentions"] = std::move(arr);
  }
  return j.dump();
}

void write_documents(std::ostream& out, std::span<const Document> docs) {
  for (const auto& doc : docs) out << to_json_line(doc) << '\n';
}

void write_documents(const std::filesystem::path& path, std::span<const Document> docs) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write " + path.string());
  write_documents(out, docs);
  if (!out) throw DataError("write failed: " + path.string());
}

std::vector<Document> window_filter(std::span<const Document> docs, const AnalysisWindow& window) {
  std::vector<Document> out;
  std::copy_if(docs.begin(), docs.end(), std::back_inserter(out),
               [&](const Document& d) { return window.contains(d.timestamp); });
  return out;
}

}  // namespace fame
