#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "rankmetrics/corpus.hpp"
#include "rankmetrics/error.hpp"
#include "rankmetrics/indicators.hpp"
#include "rankmetrics/numeric.hpp"

namespace rankmetrics {

struct PercentileRecord {
  std::string scientist_id;
  Indicator indicator = Indicator::Np;
  double percentile = 0.0;  // 0 worst .. 100 best within the SDS
  std::string sds;
  Rank rank = Rank::Full;
};

struct TopFlag {
  std::string scientist_id;
  Indicator indicator = Indicator::Np;
  bool is_top = false;
};

// Percentile of each value within its own population: 100 * (midrank - 1) /
// (N - 1); a population of one scores 100.
inline std::vector<double> percentiles_of(std::span<const double> values) {
  const std::size_t n = values.size();
  if (n == 0) return {};
  if (n == 1) return {100.0};
  auto ranks = midranks(values);
  const double denom = static_cast<double>(n - 1);
  for (auto& r : ranks) r = 100.0 * (r - 1.0) / denom;
  return ranks;
}

// Number of top positions for a population of n: max(1, floor(fraction * n)).
inline std::size_t top_count(std::size_t n, double fraction) {
  const auto k = static_cast<std::size_t>(std::floor(fraction * static_cast<double>(n) + 1e-9));
  return std::max<std::size_t>(1, k);
}

// Flags every value >= the k-th largest value (ties at the cutoff included).
inline std::vector<bool> top_flags(std::span<const double> values, double fraction) {
  if (!(fraction > 0.0 && fraction < 1.0)) throw DomainError("top fraction must lie in (0, 1)");
  std::vector<bool> flags(values.size(), false);
  if (values.empty()) return flags;
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end(), std::greater<>());
  const std::size_t k = std::min(top_count(values.size(), fraction), values.size());
  const double cutoff = sorted[k - 1];
  for (std::size_t i = 0; i < values.size(); ++i) flags[i] = values[i] >= cutoff;
  return flags;
}

namespace detail {

// Indices into `records` grouped by SDS; records outside the indicator's
// population or not on the roster are skipped.
struct SdsGroups {
  std::map<std::string, std::vector<std::size_t>> members;
  std::vector<double> values;          // parallel to records
  std::vector<std::size_t> scientist;  // roster index, parallel to records
};

inline SdsGroups group_by_sds(const Corpus& corpus, std::span<const IndicatorRecord> records, Indicator indicator) {
  SdsGroups g;
  g.values.resize(records.size());
  g.scientist.resize(records.size());
  for (std::size_t i = 0; i < records.size(); ++i) {
    auto s = corpus.find_scientist(records[i].scientist_id);
    if (!s) continue;
    auto v = indicator_value(records[i], indicator);
    if (!v) continue;
    g.values[i] = *v;
    g.scientist[i] = *s;
    g.members[corpus.scientists()[*s].sds].push_back(i);
  }
  return g;
}

}  // namespace detail

// National percentile of each scientist within their SDS. QI excludes
// scientists without publications; N_p and FSS rank them at zero.
inline std::vector<PercentileRecord> sds_percentiles(const Corpus& corpus, std::span<const IndicatorRecord> records,
                                                     Indicator indicator) {
  auto groups = detail::group_by_sds(corpus, records, indicator);
  std::vector<std::optional<double>> pct(records.size());
  for (const auto& [sds, members] : groups.members) {
    std::vector<double> vals;
    vals.reserve(members.size());
    for (auto i : members) vals.push_back(groups.values[i]);
    const auto p = percentiles_of(vals);
    for (std::size_t k = 0; k < members.size(); ++k) pct[members[k]] = p[k];
  }
  std::vector<PercentileRecord> out;
  for (std::size_t i = 0; i < records.size(); ++i) {
    if (!pct[i]) continue;
    const auto& sci = corpus.scientists()[groups.scientist[i]];
    out.push_back({records[i].scientist_id, indicator, *pct[i], sci.sds, sci.rank});
  }
  return out;
}

inline std::vector<TopFlag> top_scientists(const Corpus& corpus, std::span<const IndicatorRecord> records,
                                           Indicator indicator, double fraction = 0.2) {
  auto groups = detail::group_by_sds(corpus, records, indicator);
  std::vector<std::optional<bool>> top(records.size());
  for (const auto& [sds, members] : groups.members) {
    std::vector<double> vals;
    vals.reserve(members.size());
    for (auto i : members) vals.push_back(groups.values[i]);
    const auto flags = top_flags(vals, fraction);
    for (std::size_t k = 0; k < members.size(); ++k) top[members[k]] = flags[k];
  }
  std::vector<TopFlag> out;
  for (std::size_t i = 0; i < records.size(); ++i)
    if (top[i]) out.push_back({records[i].scientist_id, indicator, *top[i]});
  return out;
}

// Mean percentile per UDA x rank; a cell with nobody in it stays empty.
struct RankAverageRow {
  std::string uda;
  std::array<std::optional<double>, 3> by_rank{};
};

struct RankAverageTable {
  Indicator indicator = Indicator::Np;
  std::vector<RankAverageRow> rows;
  RankAverageRow total;
};

inline RankAverageTable uda_rank_average(std::span<const PercentileRecord> percentiles, const Corpus& corpus) {
  struct Acc {
    std::array<double, 3> sum{};
    std::array<std::int64_t, 3> n{};
  };
  std::map<std::string, Acc> per_uda;
  for (const auto& uda : corpus.udas()) per_uda[uda];
  Acc pooled;
  RankAverageTable out;
  if (!percentiles.empty()) out.indicator = percentiles.front().indicator;
  for (const auto& p : percentiles) {
    auto uda = corpus.sds_to_uda().find(p.sds);
    if (uda == corpus.sds_to_uda().end()) continue;
    const auto r = rank_index(p.rank);
    auto& acc = per_uda[uda->second];
    acc.sum[r] += p.percentile;
    ++acc.n[r];
    pooled.sum[r] += p.percentile;
    ++pooled.n[r];
  }
  auto to_row = [](std::string label, const Acc& acc) {
    RankAverageRow row;
    row.uda = std::move(label);
    for (std::size_t r = 0; r < 3; ++r)
      if (acc.n[r] > 0) row.by_rank[r] = acc.sum[r] / static_cast<double>(acc.n[r]);
    return row;
  };
  for (const auto& [uda, acc] : per_uda) out.rows.push_back(to_row(uda, acc));
  out.total = to_row("Total", pooled);
  return out;
}

inline std::string percentiles_to_csv(std::span<const PercentileRecord> records) {
  std::string out = "scientist_id,indicator,percentile\n";
  for (const auto& r : records)
    out += join_row({r.scientist_id, std::string(to_string(r.indicator)), fmt::format("{}", r.percentile)});
  return out;
}

inline std::string top_flags_to_csv(std::span<const TopFlag> flags) {
  std::string out = "scientist_id,indicator,is_top\n";
  for (const auto& f : flags)
    out += join_row({f.scientist_id, std::string(to_string(f.indicator)), f.is_top ? "true" : "false"});
  return out;
}

// SDS and rank are filled in from the corpus; unknown scientists are rejected.
inline std::vector<PercentileRecord> percentiles_from_records(std::span<const Record> rows, const Corpus& corpus) {
  std::vector<PercentileRecord> out;
  out.reserve(rows.size());
  for (const auto& r : rows) {
    PercentileRecord p;
    p.scientist_id = detail::required_text(r, "scientist_id", "percentiles");
    const auto ind = parse_indicator(detail::required_text(r, "indicator", "percentiles"));
    if (!ind) throw CorpusError("percentiles line " + std::to_string(r.line) + ": unknown indicator");
    p.indicator = *ind;
    try {
      p.percentile = std::stod(r.at("percentile"));
    } catch (const std::logic_error&) {
      throw CorpusError("percentiles line " + std::to_string(r.line) + ": percentile is not a number");
    }
    if (p.percentile < 0 || p.percentile > 100)
      throw CorpusError("percentiles line " + std::to_string(r.line) + ": percentile outside [0, 100]");
    auto s = corpus.find_scientist(p.scientist_id);
    if (!s) throw CorpusError("percentiles line " + std::to_string(r.line) + ": unknown scientist_id '" + p.scientist_id + "'");
    p.sds = corpus.scientists()[*s].sds;
    p.rank = corpus.scientists()[*s].rank;
    out.push_back(std::move(p));
  }
  return out;
}

}  // namespace rankmetrics
