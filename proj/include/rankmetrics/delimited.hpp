#pragma once

#include <cstddef>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "rankmetrics/error.hpp"

namespace rankmetrics {

// One input record, field name -> raw text. `line` is the 1-based physical
// line where the record starts (the header is line 1 in delimited files).
struct Record {
  std::size_t line = 0;
  std::map<std::string, std::string> fields;

  const std::string& at(const std::string& name) const {
    auto it = fields.find(name);
    if (it == fields.end()) throw CorpusError("line " + std::to_string(line) + ": missing field '" + name + "'");
    return it->second;
  }
};

namespace detail {

// RFC 4180 splitting: comma separated, double-quote escaping, quoted fields
// may span lines. Returns rows with the line number each row starts on.
inline std::vector<std::pair<std::size_t, std::vector<std::string>>> split_delimited(std::string_view text) {
  std::vector<std::pair<std::size_t, std::vector<std::string>>> rows;
  std::vector<std::string> row;
  std::string field;
  bool in_quotes = false;
  bool field_started = false;
  std::size_t line = 1;
  std::size_t row_line = 1;

  auto end_field = [&] {
    row.push_back(std::move(field));
    field.clear();
    field_started = false;
  };
  auto end_row = [&] {
    end_field();
    const bool blank = row.size() == 1 && row.front().empty();
    if (!blank) rows.emplace_back(row_line, std::move(row));
    row.clear();
  };

  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (in_quotes) {
      if (c == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          field.push_back('"');
          ++i;
        } else {
          in_quotes = false;
        }
      } else {
        if (c == '\n') ++line;
        field.push_back(c);
      }
      continue;
    }
    switch (c) {
      case '"':
        if (field_started && !field.empty())
          throw CorpusError("line " + std::to_string(line) + ": stray quote inside unquoted field");
        in_quotes = true;
        field_started = true;
        break;
      case ',':
        end_field();
        break;
      case '\r':
        break;
      case '\n':
        end_row();
        ++line;
        row_line = line;
        break;
      default:
        field.push_back(c);
        field_started = true;
    }
  }
  if (in_quotes) throw CorpusError("line " + std::to_string(row_line) + ": unterminated quoted field");
  if (field_started || !field.empty() || !row.empty()) end_row();
  return rows;
}

inline std::string json_to_text(const nlohmann::json& v) {
  if (v.is_null()) return {};
  if (v.is_string()) return v.get<std::string>();
  if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
  if (v.is_number_integer()) return std::to_string(v.get<long long>());
  if (v.is_number_unsigned()) return std::to_string(v.get<unsigned long long>());
  if (v.is_array()) {
    std::string out;
    for (const auto& item : v) {
      if (!out.empty()) out.push_back(';');
      out += json_to_text(item);
    }
    return out;
  }
  return v.dump();
}

}  // namespace detail

// Parses delimited text with a header row into records.
inline std::vector<Record> parse_delimited(std::string_view text) {
  auto rows = detail::split_delimited(text);
  std::vector<Record> out;
  if (rows.empty()) return out;
  const auto header = rows.front().second;
  out.reserve(rows.size() - 1);
  for (std::size_t r = 1; r < rows.size(); ++r) {
    auto& [line, cells] = rows[r];
    if (cells.size() != header.size()) {
      throw CorpusError("line " + std::to_string(line) + ": expected " + std::to_string(header.size()) +
                        " fields, found " + std::to_string(cells.size()));
    }
    Record rec;
    rec.line = line;
    for (std::size_t c = 0; c < header.size(); ++c) rec.fields.emplace(header[c], std::move(cells[c]));
    out.push_back(std::move(rec));
  }
  return out;
}

// One JSON object per non-blank line, same field names as the delimited form.
inline std::vector<Record> parse_ndjson(std::string_view text) {
  std::vector<Record> out;
  std::size_t line = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t nl = text.find('\n', pos);
    const std::string_view raw = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    ++line;
    if (raw.find_first_not_of(" \t\r") != std::string_view::npos) {
      nlohmann::json obj;
      try {
        obj = nlohmann::json::parse(raw);
      } catch (const nlohmann::json::parse_error& e) {
        throw CorpusError("line " + std::to_string(line) + ": malformed JSON record: " + e.what());
      }
      if (!obj.is_object()) throw CorpusError("line " + std::to_string(line) + ": record is not an object");
      Record rec;
      rec.line = line;
      for (const auto& [k, v] : obj.items()) rec.fields.emplace(k, detail::json_to_text(v));
      out.push_back(std::move(rec));
    }
    if (nl == std::string_view::npos) break;
    pos = nl + 1;
  }
  return out;
}

inline bool looks_like_ndjson(std::string_view text) {
  const auto first = text.find_first_not_of(" \t\r\n\xEF\xBB\xBF");
  return first != std::string_view::npos && text[first] == '{';
}

inline std::vector<Record> parse_records(std::string_view text) {
  if (text.starts_with("\xEF\xBB\xBF")) text.remove_prefix(3);
  return looks_like_ndjson(text) ? parse_ndjson(text) : parse_delimited(text);
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline std::vector<Record> read_records(const std::string& path) {
  try {
    return parse_records(read_file(path));
  } catch (const CorpusError& e) {
    throw CorpusError(path + ": " + e.what());
  }
}

inline std::string escape_field(std::string_view field) {
  if (field.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(field);
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

inline std::string join_row(const std::vector<std::string>& fields) {
  std::string out;
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i > 0) out.push_back(',');
    out += escape_field(fields[i]);
  }
  out.push_back('\n');
  return out;
}

inline void write_file(const std::string& path, std::string_view content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write '" + path + "'");
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
}

}  // namespace rankmetrics
