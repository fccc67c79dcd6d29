#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "rankmetrics/corpus.hpp"
#include "rankmetrics/indicators.hpp"
#include "rankmetrics/numeric.hpp"

namespace rankmetrics {

struct ActivityCell {
  std::int64_t headcount = 0;
  std::int64_t publishing = 0;  // n_p >= 1
  std::int64_t cited = 0;       // fss > 0

  double publishing_share() const { return percent(publishing, headcount); }
  double cited_share() const { return percent(cited, headcount); }

  ActivityCell& operator+=(const ActivityCell& o) {
    headcount += o.headcount;
    publishing += o.publishing;
    cited += o.cited;
    return *this;
  }
};

struct ActivityRow {
  std::string uda;
  std::array<ActivityCell, 3> by_rank{};
  ActivityCell total;
};

struct ActivityTable {
  std::vector<ActivityRow> rows;
  ActivityRow total;
};

// Publication- and citation-activity counts per UDA x rank. Scientists without
// an indicator record count as inactive.
inline ActivityTable activity_rates(const Corpus& corpus, std::span<const IndicatorRecord> indicators) {
  std::vector<const IndicatorRecord*> by_scientist(corpus.scientists().size(), nullptr);
  for (const auto& r : indicators)
    if (auto i = corpus.find_scientist(r.scientist_id)) by_scientist[*i] = &r;

  std::map<std::string, ActivityRow> rows;
  for (const auto& uda : corpus.udas()) rows[uda].uda = uda;
  for (std::size_t i = 0; i < by_scientist.size(); ++i) {
    const auto& s = corpus.scientists()[i];
    auto& cell = rows[s.uda].by_rank[rank_index(s.rank)];
    ++cell.headcount;
    if (const auto* r = by_scientist[i]) {
      if (r->n_p >= 1) ++cell.publishing;
      if (r->fss > 0) ++cell.cited;
    }
  }

  ActivityTable out;
  out.total.uda = "Total";
  for (auto& [uda, row] : rows) {
    for (std::size_t r = 0; r < 3; ++r) {
      row.total += row.by_rank[r];
      out.total.by_rank[r] += row.by_rank[r];
    }
    out.total.total += row.total;
    out.rows.push_back(row);
  }
  return out;
}

}  // namespace rankmetrics
