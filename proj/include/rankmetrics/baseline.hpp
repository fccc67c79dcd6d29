#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include <fmt/format.h>

#include "rankmetrics/corpus.hpp"
#include "rankmetrics/delimited.hpp"
#include "rankmetrics/error.hpp"
#include "rankmetrics/numeric.hpp"

namespace rankmetrics {

// Citation reference values for one (publication year, subject category).
struct BaselineCell {
  int year = 0;
  std::string category;
  double median_citations = 0.0;
  double mean_citations = 0.0;
  std::int64_t publication_count = 0;
};

class BaselineTable {
 public:
  using Key = std::pair<int, std::string>;

  void insert(BaselineCell cell) {
    Key key{cell.year, cell.category};
    cells_.insert_or_assign(std::move(key), std::move(cell));
  }

  const BaselineCell* find(int year, const std::string& category) const {
    auto it = cells_.find(Key{year, category});
    return it == cells_.end() ? nullptr : &it->second;
  }

  const BaselineCell& at(int year, const std::string& category) const {
    if (const auto* c = find(year, category)) return *c;
    throw BaselineError(fmt::format("no baseline cell for (year {}, category '{}')", year, category));
  }

  std::size_t size() const { return cells_.size(); }
  const std::map<Key, BaselineCell>& cells() const { return cells_; }

 private:
  std::map<Key, BaselineCell> cells_;
};

// One cell per (year, category) pair occurring on any publication. A
// publication with several categories contributes to each of its cells.
inline BaselineTable build_baselines(const Corpus& corpus) {
  std::map<BaselineTable::Key, std::vector<double>> samples;
  for (const auto& p : corpus.publications())
    for (const auto& cat : p.categories) samples[{p.year, cat}].push_back(static_cast<double>(p.citations));

  BaselineTable table;
  for (auto& [key, values] : samples) {
    BaselineCell cell;
    cell.year = key.first;
    cell.category = key.second;
    cell.publication_count = static_cast<std::int64_t>(values.size());
    cell.mean_citations = mean(values);
    cell.median_citations = median(std::move(values));
    table.insert(std::move(cell));
  }
  return table;
}

// Divisor used for a cell: the median, or the mean when the median is zero.
// Returns 0 when both are zero (every member uncited).
inline double standardization_divisor(const BaselineCell& cell) {
  if (cell.median_citations > 0) return cell.median_citations;
  return cell.mean_citations;
}

// Citations over the cell reference, averaged across the publication's
// categories.
inline double standardize_publication(const Publication& pub, const BaselineTable& baselines) {
  double sum = 0.0;
  for (const auto& cat : pub.categories) {
    const auto& cell = baselines.at(pub.year, cat);
    const double divisor = standardization_divisor(cell);
    if (divisor > 0) sum += static_cast<double>(pub.citations) / divisor;
  }
  return sum / static_cast<double>(pub.categories.size());
}

inline std::string baselines_to_csv(const BaselineTable& table) {
  std::string out = "year,category,median,mean,count\n";
  for (const auto& [key, c] : table.cells())
    out += join_row({std::to_string(c.year), c.category, fmt::format("{}", c.median_citations),
                     fmt::format("{}", c.mean_citations), std::to_string(c.publication_count)});
  return out;
}

inline BaselineTable baselines_from_records(std::span<const Record> rows) {
  BaselineTable table;
  for (const auto& r : rows) {
    BaselineCell cell;
    cell.year = detail::parse_int<int>(r, "year", "baselines");
    cell.category = detail::required_text(r, "category", "baselines");
    try {
      cell.median_citations = std::stod(r.at("median"));
      cell.mean_citations = std::stod(r.at("mean"));
    } catch (const std::logic_error&) {
      throw CorpusError("baselines line " + std::to_string(r.line) + ": median/mean is not a number");
    }
    cell.publication_count = detail::parse_int<std::int64_t>(r, "count", "baselines");
    if (cell.median_citations < 0 || cell.mean_citations < 0 || cell.publication_count < 1)
      throw CorpusError("baselines line " + std::to_string(r.line) + ": negative statistic or empty cell");
    table.insert(std::move(cell));
  }
  return table;
}

}  // namespace rankmetrics
