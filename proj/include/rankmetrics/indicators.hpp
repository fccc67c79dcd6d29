#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "rankmetrics/baseline.hpp"
#include "rankmetrics/corpus.hpp"
#include "rankmetrics/error.hpp"
#include "rankmetrics/log.hpp"

namespace rankmetrics {

enum class WeightScheme { Equal, Positional };

// Which positional rule a byline falls under, decided from the affiliations of
// positions 1, 2, n-1 and n.
enum class BylineCase {
  SameUniversityEnds,     // first and last author share a university
  SeparateBoundaryPairs,  // first two and last two authors at different universities
  Unclassified,           // neither, or boundary affiliation missing
};

// UDA -> scheme. UDAs not listed as positional use equal weights.
struct WeightSchemeConfig {
  std::set<std::string> positional_udas;

  WeightScheme scheme_for(const std::string& uda) const {
    return positional_udas.contains(uda) ? WeightScheme::Positional : WeightScheme::Equal;
  }
};

// `affiliations` holds one entry per byline position, in order.
inline BylineCase classify_byline(std::span<const std::optional<std::string>> affiliations) {
  const std::size_t n = affiliations.size();
  if (n == 0) return BylineCase::Unclassified;
  const auto& first = affiliations[0];
  const auto& last = affiliations[n - 1];
  const auto& second = affiliations[n >= 2 ? 1 : 0];
  const auto& penultimate = affiliations[n >= 2 ? n - 2 : 0];
  if (!first || !last || !second || !penultimate) return BylineCase::Unclassified;
  if (*first == *last) return BylineCase::SameUniversityEnds;
  const bool disjoint = *first != *penultimate && *second != *last && *second != *penultimate;
  return disjoint ? BylineCase::SeparateBoundaryPairs : BylineCase::Unclassified;
}

inline std::vector<double> equal_weights(std::size_t author_count) {
  return std::vector<double>(author_count, 1.0 / static_cast<double>(author_count));
}

// Credit share per byline position (index 0 = first author).
//
// Positional scheme, same-university ends: 0.40 first, 0.40 last, 0.20 split
// over the rest. Separate boundary pairs: 0.30 first and last, 0.15 second and
// second-to-last, 0.10 split over the rest. When roles coincide on short
// bylines the role weights add up on that position, and a vector whose roles
// do not absorb the full unit (no "rest" positions) is renormalized to 1.
// Unclassified bylines get equal weights.
inline std::vector<double> coauthor_weights(std::size_t author_count, BylineCase byline, WeightScheme scheme) {
  if (author_count == 0) throw DomainError("coauthor_weights: author_count must be >= 1");
  if (author_count == 1) return {1.0};
  if (scheme == WeightScheme::Equal || byline == BylineCase::Unclassified) return equal_weights(author_count);

  const std::size_t n = author_count;
  std::vector<double> w(n, 0.0);
  std::vector<bool> has_role(n, false);
  auto assign = [&](std::size_t pos, double share) {
    w[pos] += share;
    has_role[pos] = true;
  };
  double rest_share = 0.0;
  if (byline == BylineCase::SameUniversityEnds) {
    assign(0, 0.40);
    assign(n - 1, 0.40);
    rest_share = 0.20;
  } else {
    assign(0, 0.30);
    assign(n - 1, 0.30);
    assign(1, 0.15);
    assign(n - 2, 0.15);
    rest_share = 0.10;
  }
  std::size_t rest = 0;
  for (bool r : has_role) rest += r ? 0 : 1;
  if (rest > 0) {
    const double each = rest_share / static_cast<double>(rest);
    for (std::size_t i = 0; i < n; ++i)
      if (!has_role[i]) w[i] = each;
    return w;
  }
  double total = 0.0;
  for (double x : w) total += x;
  for (double& x : w) x /= total;
  return w;
}

// Weights for publication `p` of `corpus` under `scheme`.
inline std::vector<double> byline_weights(const Corpus& corpus, std::size_t p, WeightScheme scheme) {
  const auto line = corpus.byline(p);
  if (scheme == WeightScheme::Equal) return coauthor_weights(line.size(), BylineCase::Unclassified, scheme);
  std::vector<std::optional<std::string>> affiliations;
  affiliations.reserve(line.size());
  for (const auto& a : line) affiliations.push_back(a.affiliation);
  const auto byline = classify_byline(affiliations);
  if (byline == BylineCase::Unclassified && line.size() > 1)
    logger().debug("pub '{}': byline matches no positional case, using equal weights", corpus.publications()[p].id);
  return coauthor_weights(line.size(), byline, scheme);
}

struct IndicatorRecord {
  std::string scientist_id;
  std::int64_t n_p = 0;
  std::optional<double> qi;  // absent when n_p == 0
  double fss = 0.0;
};

enum class Indicator { Np, Fss, Qi };

inline constexpr std::array<Indicator, 3> kIndicators{Indicator::Np, Indicator::Fss, Indicator::Qi};

inline std::string_view to_string(Indicator i) {
  switch (i) {
    case Indicator::Np: return "N_p";
    case Indicator::Fss: return "FSS";
    case Indicator::Qi: return "QI";
  }
  return "?";
}

inline std::optional<Indicator> parse_indicator(std::string_view s) {
  if (s == "N_p" || s == "NP" || s == "np" || s == "n_p") return Indicator::Np;
  if (s == "FSS" || s == "fss") return Indicator::Fss;
  if (s == "QI" || s == "qi") return Indicator::Qi;
  return std::nullopt;
}

// The value a scientist is ranked on, or nullopt when the scientist is outside
// that indicator's ranking population (inactive scientists for QI).
inline std::optional<double> indicator_value(const IndicatorRecord& r, Indicator i) {
  switch (i) {
    case Indicator::Np: return static_cast<double>(r.n_p);
    case Indicator::Fss: return r.fss;
    case Indicator::Qi: return r.qi;
  }
  return std::nullopt;
}

// One record per roster scientist, in roster order.
inline std::vector<IndicatorRecord> compute_indicators(const Corpus& corpus, const BaselineTable& baselines,
                                                       const WeightSchemeConfig& schemes = {}) {
  const auto pubs = corpus.publications();
  std::vector<double> standardized(pubs.size());
  for (std::size_t p = 0; p < pubs.size(); ++p) standardized[p] = standardize_publication(pubs[p], baselines);

  // Weights depend on the scheme, so cache both vectors lazily per publication.
  std::vector<std::vector<double>> equal_cache(pubs.size());
  std::vector<std::vector<double>> positional_cache(pubs.size());

  std::vector<IndicatorRecord> out;
  out.reserve(corpus.scientists().size());
  for (std::size_t s = 0; s < corpus.scientists().size(); ++s) {
    const auto& sci = corpus.scientists()[s];
    const auto scheme = schemes.scheme_for(sci.uda);
    IndicatorRecord rec;
    rec.scientist_id = sci.id;
    double score_sum = 0.0;
    for (const auto& credit : corpus.credits(s)) {
      auto& cache = scheme == WeightScheme::Equal ? equal_cache[credit.publication] : positional_cache[credit.publication];
      if (cache.empty()) cache = byline_weights(corpus, credit.publication, scheme);
      const double score = standardized[credit.publication];
      ++rec.n_p;
      score_sum += score;
      rec.fss += score * cache[static_cast<std::size_t>(credit.position - 1)];
    }
    if (rec.n_p > 0) rec.qi = score_sum / static_cast<double>(rec.n_p);
    out.push_back(std::move(rec));
  }
  return out;
}

inline std::string indicators_to_csv(std::span<const IndicatorRecord> records) {
  std::string out = "scientist_id,n_p,qi,fss\n";
  for (const auto& r : records)
    out += join_row({r.scientist_id, std::to_string(r.n_p), r.qi ? fmt::format("{}", *r.qi) : std::string(),
                     fmt::format("{}", r.fss)});
  return out;
}

inline std::vector<IndicatorRecord> indicators_from_records(std::span<const Record> rows) {
  std::vector<IndicatorRecord> out;
  out.reserve(rows.size());
  for (const auto& r : rows) {
    IndicatorRecord rec;
    rec.scientist_id = detail::required_text(r, "scientist_id", "indicators");
    rec.n_p = detail::parse_int<std::int64_t>(r, "n_p", "indicators");
    try {
      if (auto qi = detail::optional_text(r, "qi")) rec.qi = std::stod(*qi);
      rec.fss = std::stod(r.at("fss"));
    } catch (const std::logic_error&) {
      throw CorpusError("indicators line " + std::to_string(r.line) + ": qi/fss is not a number");
    }
    if (rec.n_p < 0 || rec.fss < 0 || (rec.qi && *rec.qi < 0))
      throw CorpusError("indicators line " + std::to_string(r.line) + ": negative indicator value");
    if (rec.n_p == 0 && (rec.qi || rec.fss != 0.0))
      throw CorpusError("indicators line " + std::to_string(r.line) + ": n_p = 0 requires empty qi and fss = 0");
    out.push_back(std::move(rec));
  }
  return out;
}

}  // namespace rankmetrics
