#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <fmt/format.h>

#include "rankmetrics/delimited.hpp"
#include "rankmetrics/error.hpp"
#include "rankmetrics/numeric.hpp"

namespace rankmetrics {

enum class TableFormat { Text, Csv, Markdown };

inline std::optional<TableFormat> parse_format(std::string_view s) {
  if (s == "text" || s == "txt") return TableFormat::Text;
  if (s == "csv") return TableFormat::Csv;
  if (s == "md" || s == "markdown") return TableFormat::Markdown;
  return std::nullopt;
}

inline std::string_view file_extension(TableFormat f) {
  switch (f) {
    case TableFormat::Text: return "txt";
    case TableFormat::Csv: return "csv";
    case TableFormat::Markdown: return "md";
  }
  return "txt";
}

enum class CellKind { Label, Count, CountShare, Fixed, OutOf, ShareIndex, Missing };

// A typed table cell. Rendering conventions: counts with thousands
// separators, "x (y%)" shares with one decimal, "x out of y", and
// "share (index)" with the index to two decimals.
struct Cell {
  CellKind kind = CellKind::Missing;
  std::string text;
  double a = 0.0;
  double b = 0.0;
  int decimals = 0;

  static Cell label(std::string s) { return {CellKind::Label, std::move(s)}; }
  static Cell count(std::int64_t n) { return {CellKind::Count, {}, static_cast<double>(n)}; }
  static Cell count_share(std::int64_t n, double share) {
    return {CellKind::CountShare, {}, static_cast<double>(n), share, 1};
  }
  static Cell fixed(double v, int decimals) { return {CellKind::Fixed, {}, v, 0.0, decimals}; }
  static Cell fixed(std::optional<double> v, int decimals) { return v ? fixed(*v, decimals) : missing(); }
  static Cell out_of(std::int64_t x, std::int64_t y) {
    return {CellKind::OutOf, {}, static_cast<double>(x), static_cast<double>(y)};
  }
  static Cell share_index(double share, std::optional<double> index) {
    if (!index) return missing();
    return {CellKind::ShareIndex, {}, share, *index, 1};
  }
  static Cell missing() { return {}; }
};

// `parts` names the delimited sub-columns of a multi-valued column (e.g.
// {"count", "share"}); empty for single-valued columns.
struct Column {
  std::string name;
  std::vector<std::string> parts;
};

struct Table {
  std::string key;  // "T1" .. "T10", "CHI"
  std::string title;
  std::string slug;  // file stem
  std::vector<Column> columns;
  std::vector<std::vector<Cell>> rows;
  std::vector<std::pair<std::string, std::string>> metadata;
  std::vector<std::string> notes;
};

namespace detail {

inline std::string render_text_cell(const Cell& c) {
  switch (c.kind) {
    case CellKind::Label: return c.text;
    case CellKind::Count: return with_thousands(static_cast<std::int64_t>(c.a));
    case CellKind::CountShare:
      return fmt::format("{} ({}%)", with_thousands(static_cast<std::int64_t>(c.a)), format_fixed(c.b, 1));
    case CellKind::Fixed: return format_fixed(c.a, c.decimals);
    case CellKind::OutOf:
      return fmt::format("{} out of {}", static_cast<std::int64_t>(c.a), static_cast<std::int64_t>(c.b));
    case CellKind::ShareIndex: return fmt::format("{} ({})", format_fixed(c.a, 1), format_fixed(c.b, 2));
    case CellKind::Missing: return "-";
  }
  return {};
}

inline std::vector<std::string> render_csv_cell(const Cell& c, std::size_t arity) {
  switch (c.kind) {
    case CellKind::Label: return {c.text};
    case CellKind::Count: return {std::to_string(static_cast<std::int64_t>(c.a))};
    case CellKind::CountShare: return {std::to_string(static_cast<std::int64_t>(c.a)), format_fixed(c.b, 1)};
    case CellKind::Fixed: return {format_fixed(c.a, c.decimals)};
    case CellKind::OutOf:
      return {std::to_string(static_cast<std::int64_t>(c.a)), std::to_string(static_cast<std::int64_t>(c.b))};
    case CellKind::ShareIndex: return {format_fixed(c.a, 1), format_fixed(c.b, 2)};
    case CellKind::Missing: return std::vector<std::string>(arity, "");
  }
  return {};
}

inline std::string metadata_line(const Table& t) {
  std::string out;
  for (const auto& [k, v] : t.metadata) {
    if (!out.empty()) out += ", ";
    out += k + "=" + v;
  }
  return out;
}

}  // namespace detail

inline std::string render_text(const Table& t) {
  std::vector<std::vector<std::string>> grid;
  std::vector<std::string> header;
  for (const auto& c : t.columns) header.push_back(c.name);
  grid.push_back(header);
  for (const auto& row : t.rows) {
    std::vector<std::string> line;
    for (const auto& c : row) line.push_back(detail::render_text_cell(c));
    grid.push_back(std::move(line));
  }
  std::vector<std::size_t> width(t.columns.size(), 0);
  for (const auto& line : grid)
    for (std::size_t i = 0; i < line.size() && i < width.size(); ++i) width[i] = std::max(width[i], line[i].size());

  std::string out = t.key + "  " + t.title + "\n";
  for (const auto& line : grid) {
    std::string text;
    for (std::size_t i = 0; i < line.size(); ++i) {
      if (i == 0)
        text += fmt::format("{:<{}}", line[i], width[i]);
      else
        text += fmt::format("  {:>{}}", line[i], width[i]);
    }
    while (!text.empty() && text.back() == ' ') text.pop_back();
    out += text + "\n";
  }
  out += "# " + detail::metadata_line(t) + "\n";
  for (const auto& n : t.notes) out += "# note: " + n + "\n";
  return out;
}

inline std::string render_markdown(const Table& t) {
  std::string out = "### " + t.key + ": " + t.title + "\n\n|";
  for (const auto& c : t.columns) out += " " + c.name + " |";
  out += "\n|";
  for (std::size_t i = 0; i < t.columns.size(); ++i) out += i == 0 ? " --- |" : " ---: |";
  out += "\n";
  for (const auto& row : t.rows) {
    out += "|";
    for (const auto& c : row) out += " " + detail::render_text_cell(c) + " |";
    out += "\n";
  }
  out += "\n_" + detail::metadata_line(t) + "_\n";
  for (const auto& n : t.notes) out += "\n> " + n + "\n";
  return out;
}

// Comment lines ("# ...") carry title, metadata and notes; then one header
// row and the data rows. Multi-valued columns expand to name_part columns.
inline std::string render_csv(const Table& t) {
  std::string out = "# " + t.key + ": " + t.title + "\n";
  for (const auto& [k, v] : t.metadata) out += "# " + k + "=" + v + "\n";
  for (const auto& n : t.notes) out += "# note: " + n + "\n";
  std::vector<std::string> header;
  for (const auto& c : t.columns) {
    if (c.parts.empty())
      header.push_back(c.name);
    else
      for (const auto& p : c.parts) header.push_back(c.name + "_" + p);
  }
  out += join_row(header);
  for (const auto& row : t.rows) {
    std::vector<std::string> fields;
    for (std::size_t i = 0; i < row.size(); ++i) {
      const auto arity = std::max<std::size_t>(1, t.columns[i].parts.size());
      for (auto& f : detail::render_csv_cell(row[i], arity)) fields.push_back(std::move(f));
    }
    out += join_row(fields);
  }
  return out;
}

inline std::string format_table(const Table& t, TableFormat format) {
  switch (format) {
    case TableFormat::Text: return render_text(t);
    case TableFormat::Csv: return render_csv(t);
    case TableFormat::Markdown: return render_markdown(t);
  }
  return {};
}

// Reads back a delimited table written by render_csv: comment lines are
// skipped, the first remaining row is the header.
inline std::vector<Record> parse_csv_table(std::string_view text) {
  std::string body;
  std::size_t pos = 0;
  while (pos < text.size()) {
    auto nl = text.find('\n', pos);
    auto line = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos + 1);
    if (!line.starts_with("#")) body += line;
    if (nl == std::string_view::npos) break;
    pos = nl + 1;
  }
  return parse_delimited(body);
}

}  // namespace rankmetrics
