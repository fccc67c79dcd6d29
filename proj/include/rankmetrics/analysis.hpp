#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "rankmetrics/corpus.hpp"
#include "rankmetrics/error.hpp"
#include "rankmetrics/indicators.hpp"
#include "rankmetrics/numeric.hpp"
#include "rankmetrics/ranking.hpp"
#include "rankmetrics/stats.hpp"

namespace rankmetrics {

// ---------------------------------------------------------------------------
// Causal-variables-sequence criterion

enum class Winner { A, B, Tie };

struct DominanceResult {
  std::string sds;
  Rank group_a = Rank::Full;
  Rank group_b = Rank::Assistant;
  double r_eff_a = 0, r_max_a = 0, r_diff_a = 0;
  double r_eff_b = 0, r_max_b = 0, r_diff_b = 0;
  Winner winner = Winner::Tie;
};

// Pools both groups and ranks them ascending (best = N, ties share midranks).
// R_max of a group is the rank sum it would have if it held the top |g|
// places; R_diff = R_max - R_eff measures its distance from that ideal. The
// group closer to its ideal wins. R_diff_a + R_diff_b == |A| * |B| always.
inline DominanceResult sequence_criterion(std::span<const double> values_a, std::span<const double> values_b) {
  if (values_a.empty() || values_b.empty()) throw DomainError("sequence_criterion: both groups must be non-empty");
  std::vector<double> pooled(values_a.begin(), values_a.end());
  pooled.insert(pooled.end(), values_b.begin(), values_b.end());
  const auto ranks = midranks(pooled);
  const double n = static_cast<double>(pooled.size());
  const double na = static_cast<double>(values_a.size());
  const double nb = static_cast<double>(values_b.size());

  DominanceResult out;
  for (std::size_t i = 0; i < values_a.size(); ++i) out.r_eff_a += ranks[i];
  for (std::size_t i = values_a.size(); i < ranks.size(); ++i) out.r_eff_b += ranks[i];
  // sum of N, N-1, ..., N-|g|+1
  out.r_max_a = na * n - na * (na - 1.0) / 2.0;
  out.r_max_b = nb * n - nb * (nb - 1.0) / 2.0;
  out.r_diff_a = out.r_max_a - out.r_eff_a;
  out.r_diff_b = out.r_max_b - out.r_eff_b;
  if (out.r_diff_a < out.r_diff_b)
    out.winner = Winner::A;
  else if (out.r_diff_b < out.r_diff_a)
    out.winner = Winner::B;
  else
    out.winner = Winner::Tie;
  return out;
}

struct DominanceRow {
  std::string uda;
  std::int64_t b_wins = 0;
  std::int64_t compared = 0;  // SDSs with both groups present
  std::int64_t excluded = 0;  // SDSs lacking one of the groups
};

struct DominanceTable {
  Indicator indicator = Indicator::Np;
  Rank group_a = Rank::Full;
  Rank group_b = Rank::Assistant;
  std::vector<DominanceRow> rows;
  DominanceRow total;
  std::vector<DominanceResult> per_sds;
};

// Counts, per UDA, the SDSs in which group_b beats group_a under the sequence
// criterion. Percentiles are monotone in the indicator within an SDS, so the
// outcome matches ranking on raw values.
inline DominanceTable dominance_counts(const Corpus& corpus, std::span<const PercentileRecord> percentiles,
                                       Rank group_a, Rank group_b) {
  DominanceTable out;
  out.group_a = group_a;
  out.group_b = group_b;
  if (!percentiles.empty()) out.indicator = percentiles.front().indicator;

  std::map<std::string, std::pair<std::vector<double>, std::vector<double>>> per_sds;
  for (const auto& [sds, uda] : corpus.sds_to_uda()) per_sds[sds];
  for (const auto& p : percentiles) {
    if (p.rank == group_a) per_sds[p.sds].first.push_back(p.percentile);
    if (p.rank == group_b) per_sds[p.sds].second.push_back(p.percentile);
  }

  std::map<std::string, DominanceRow> rows;
  for (const auto& uda : corpus.udas()) rows[uda].uda = uda;
  for (const auto& [sds, groups] : per_sds) {
    auto uda = corpus.sds_to_uda().find(sds);
    if (uda == corpus.sds_to_uda().end()) continue;
    auto& row = rows[uda->second];
    if (groups.first.empty() || groups.second.empty()) {
      ++row.excluded;
      continue;
    }
    auto result = sequence_criterion(groups.first, groups.second);
    result.sds = sds;
    result.group_a = group_a;
    result.group_b = group_b;
    ++row.compared;
    if (result.winner == Winner::B) ++row.b_wins;
    out.per_sds.push_back(std::move(result));
  }
  out.total.uda = "Total";
  for (auto& [uda, row] : rows) {
    out.total.b_wins += row.b_wins;
    out.total.compared += row.compared;
    out.total.excluded += row.excluded;
    out.rows.push_back(row);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Performance concentration per UDA x rank

struct ConcentrationCell {
  std::optional<double> gini;
  std::optional<double> bottom_top_ratio;
};

struct ConcentrationRow {
  std::string uda;
  std::array<ConcentrationCell, 3> by_rank{};
};

struct ConcentrationOptions {
  double bottom_fraction = 0.4;
  double top_fraction = 0.2;
  RatioMode mode = RatioMode::PerCapita;
};

struct ConcentrationTable {
  Indicator indicator = Indicator::Fss;
  std::vector<ConcentrationRow> rows;
};

// Gini and bottom/top ratio computed per SDS x rank, then averaged over the
// UDA's SDSs weighted by the SDS x rank headcount. SDSs whose ratio is
// undefined (all-zero output) drop out of the ratio average only.
inline ConcentrationTable concentration_table(const Corpus& corpus, std::span<const IndicatorRecord> records,
                                              Indicator indicator = Indicator::Fss,
                                              const ConcentrationOptions& options = {}) {
  std::map<std::string, std::array<std::vector<double>, 3>> per_sds;
  for (const auto& r : records) {
    auto s = corpus.find_scientist(r.scientist_id);
    if (!s) continue;
    auto v = indicator_value(r, indicator);
    if (!v) continue;
    const auto& sci = corpus.scientists()[*s];
    per_sds[sci.sds][rank_index(sci.rank)].push_back(*v);
  }

  ConcentrationTable out;
  out.indicator = indicator;
  for (const auto& uda : corpus.udas()) {
    ConcentrationRow row;
    row.uda = uda;
    for (std::size_t k = 0; k < 3; ++k) {
      std::vector<WeightedGini> ginis;
      double ratio_num = 0.0;
      double ratio_den = 0.0;
      for (const auto& sds : corpus.sds_of(uda)) {
        auto it = per_sds.find(sds);
        if (it == per_sds.end() || it->second[k].empty()) continue;
        const auto& vals = it->second[k];
        const double headcount = static_cast<double>(vals.size());
        ginis.push_back({gini(vals), headcount});
        if (auto ratio = bottom_top_ratio(vals, options.bottom_fraction, options.top_fraction, options.mode)) {
          ratio_num += *ratio * headcount;
          ratio_den += headcount;
        }
      }
      if (!ginis.empty()) row.by_rank[k].gini = weighted_uda_gini(ginis);
      if (ratio_den > 0) row.by_rank[k].bottom_top_ratio = ratio_num / ratio_den;
    }
    out.rows.push_back(std::move(row));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Rank composition of top scientists

struct TopShareCell {
  std::int64_t top = 0;
  std::int64_t staff = 0;
  double top_share = 0.0;    // percent of the row's top scientists
  double staff_share = 0.0;  // percent of the row's staff
  std::optional<double> index;
};

struct TopDistributionRow {
  std::string uda;
  std::array<TopShareCell, 3> by_rank{};
  std::optional<ChiSquareResult> chi_square;  // top/other x rank association
};

struct TopDistributionTable {
  Indicator indicator = Indicator::Fss;
  std::vector<TopDistributionRow> rows;
  TopDistributionRow total;
};

namespace detail {

inline void finish_top_row(TopDistributionRow& row) {
  std::int64_t top = 0;
  std::int64_t staff = 0;
  for (const auto& c : row.by_rank) {
    top += c.top;
    staff += c.staff;
  }
  std::vector<std::vector<double>> contingency(2);
  for (auto& c : row.by_rank) {
    c.top_share = percent(c.top, top);
    c.staff_share = percent(c.staff, staff);
    if (c.staff_share > 0 && top > 0) c.index = concentration_index(c.top_share, c.staff_share);
    if (c.staff > 0) {
      contingency[0].push_back(static_cast<double>(c.top));
      contingency[1].push_back(static_cast<double>(c.staff - c.top));
    }
  }
  // Ranks absent from the row are dropped; the test needs two ranks and both
  // top and non-top scientists.
  if (contingency[0].size() >= 2 && top > 0 && top < staff) row.chi_square = chi_square_independence(contingency);
}

}  // namespace detail

// Share of each rank among the flagged top scientists, its concentration index
// against the rank's share of staff, and a Pearson test of association between
// top status and rank. Staff is the indicator's ranking population.
inline TopDistributionTable top_distribution(const Corpus& corpus, std::span<const TopFlag> flags) {
  TopDistributionTable out;
  if (!flags.empty()) out.indicator = flags.front().indicator;
  std::map<std::string, TopDistributionRow> rows;
  for (const auto& uda : corpus.udas()) rows[uda].uda = uda;
  out.total.uda = "Total";
  for (const auto& f : flags) {
    auto s = corpus.find_scientist(f.scientist_id);
    if (!s) continue;
    const auto& sci = corpus.scientists()[*s];
    const auto k = rank_index(sci.rank);
    auto& cell = rows[sci.uda].by_rank[k];
    ++cell.staff;
    ++out.total.by_rank[k].staff;
    if (f.is_top) {
      ++cell.top;
      ++out.total.by_rank[k].top;
    }
  }
  for (auto& [uda, row] : rows) {
    detail::finish_top_row(row);
    out.rows.push_back(row);
  }
  detail::finish_top_row(out.total);
  return out;
}

}  // namespace rankmetrics
