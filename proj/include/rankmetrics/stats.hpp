#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "rankmetrics/error.hpp"
#include "rankmetrics/ranking.hpp"

namespace rankmetrics {

// Population Gini coefficient, sum_i sum_j |x_i - x_j| / (2 n^2 mean),
// evaluated in O(n log n) on the sorted values. Zero when the mean is zero.
inline double gini(std::span<const double> values) {
  if (values.empty()) throw DomainError("gini: empty input");
  std::vector<double> x(values.begin(), values.end());
  for (double v : x)
    if (v < 0 || std::isnan(v)) throw DomainError("gini: values must be non-negative");
  std::sort(x.begin(), x.end());
  const double n = static_cast<double>(x.size());
  double total = 0.0;
  double weighted = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    total += x[i];
    weighted += (2.0 * static_cast<double>(i + 1) - n - 1.0) * x[i];
  }
  if (total == 0.0) return 0.0;
  return weighted / (n * total);
}

struct WeightedGini {
  double gini = 0.0;
  double headcount = 0.0;
};

// Headcount-weighted mean of per-SDS Gini values.
inline double weighted_uda_gini(std::span<const WeightedGini> per_sds) {
  if (per_sds.empty()) throw DomainError("weighted_uda_gini: no SDS values");
  double num = 0.0;
  double den = 0.0;
  for (const auto& g : per_sds) {
    if (!(g.headcount > 0)) throw DomainError("weighted_uda_gini: headcounts must be positive");
    num += g.gini * g.headcount;
    den += g.headcount;
  }
  return num / den;
}

enum class RatioMode {
  PerCapita,  // mean of the bottom group over mean of the top group
  RawSum,     // cumulative bottom over cumulative top
};

// Output of the weakest `bottom_fraction` relative to the strongest
// `top_fraction`. Group sizes are max(1, floor(fraction * n)). nullopt when
// the top group produces nothing.
inline std::optional<double> bottom_top_ratio(std::span<const double> values, double bottom_fraction = 0.4,
                                              double top_fraction = 0.2, RatioMode mode = RatioMode::PerCapita) {
  if (values.empty()) throw DomainError("bottom_top_ratio: empty input");
  std::vector<double> x(values.begin(), values.end());
  std::sort(x.begin(), x.end());
  const std::size_t n = x.size();
  const std::size_t k_top = std::min(n, top_count(n, top_fraction));
  const std::size_t k_bottom = std::min(n, top_count(n, bottom_fraction));
  double bottom = 0.0;
  double top = 0.0;
  for (std::size_t i = 0; i < k_bottom; ++i) bottom += x[i];
  for (std::size_t i = n - k_top; i < n; ++i) top += x[i];
  if (mode == RatioMode::PerCapita) {
    bottom /= static_cast<double>(k_bottom);
    top /= static_cast<double>(k_top);
  }
  if (top == 0.0) return std::nullopt;
  return bottom / top;
}

// A rank's share among top scientists over its share of staff (both percent).
inline double concentration_index(double top_share, double staff_share) {
  if (!(staff_share > 0)) throw DomainError("concentration_index: staff share must be positive");
  return top_share / staff_share;
}

// ---------------------------------------------------------------------------
// Regularized incomplete gamma functions.

namespace detail {

inline constexpr int kGammaMaxIter = 100000;
inline constexpr double kGammaEps = 1e-16;

// P(a, x) by its power series; converges quickly for x < a + 1.
inline double gamma_p_series(double a, double x) {
  double ap = a;
  double term = 1.0 / a;
  double sum = term;
  for (int i = 0; i < kGammaMaxIter; ++i) {
    ap += 1.0;
    term *= x / ap;
    sum += term;
    if (std::abs(term) < std::abs(sum) * kGammaEps) break;
  }
  return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

// Q(a, x) by modified Lentz continued fraction; used for x >= a + 1.
inline double gamma_q_continued_fraction(double a, double x) {
  constexpr double tiny = std::numeric_limits<double>::min() / std::numeric_limits<double>::epsilon();
  double b = x + 1.0 - a;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i < kGammaMaxIter; ++i) {
    const double an = -static_cast<double>(i) * (static_cast<double>(i) - a);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double delta = d * c;
    h *= delta;
    if (std::abs(delta - 1.0) < kGammaEps) break;
  }
  return std::exp(-x + a * std::log(x) - std::lgamma(a)) * h;
}

}  // namespace detail

// Lower regularized incomplete gamma P(a, x).
inline double regularized_gamma_p(double a, double x) {
  if (!(a > 0) || x < 0) throw DomainError("regularized_gamma_p: requires a > 0 and x >= 0");
  if (x == 0.0) return 0.0;
  if (x < a + 1.0) return detail::gamma_p_series(a, x);
  return 1.0 - detail::gamma_q_continued_fraction(a, x);
}

// Upper regularized incomplete gamma Q(a, x) = 1 - P(a, x).
inline double regularized_gamma_q(double a, double x) {
  if (!(a > 0) || x < 0) throw DomainError("regularized_gamma_q: requires a > 0 and x >= 0");
  if (x == 0.0) return 1.0;
  if (x < a + 1.0) return 1.0 - detail::gamma_p_series(a, x);
  return detail::gamma_q_continued_fraction(a, x);
}

// Upper-tail probability of the chi-square distribution.
inline double chi_square_sf(double statistic, int degrees_of_freedom) {
  if (degrees_of_freedom < 1) throw DomainError("chi_square_sf: degrees of freedom must be >= 1");
  if (statistic < 0) throw DomainError("chi_square_sf: statistic must be non-negative");
  return std::clamp(regularized_gamma_q(0.5 * degrees_of_freedom, 0.5 * statistic), 0.0, 1.0);
}

struct ChiSquareResult {
  double statistic = 0.0;
  int degrees_of_freedom = 1;
  double p_value = 1.0;
};

// Pearson test of independence on an r x k contingency table of counts
// (rows outer). Expected counts come from the marginals.
inline ChiSquareResult chi_square_independence(const std::vector<std::vector<double>>& table) {
  if (table.size() < 2) throw DomainError("chi_square_independence: need at least two rows");
  const std::size_t k = table.front().size();
  if (k < 2) throw DomainError("chi_square_independence: need at least two columns");
  std::vector<double> row_sum(table.size(), 0.0);
  std::vector<double> col_sum(k, 0.0);
  double total = 0.0;
  for (std::size_t i = 0; i < table.size(); ++i) {
    if (table[i].size() != k) throw DomainError("chi_square_independence: ragged table");
    for (std::size_t j = 0; j < k; ++j) {
      const double v = table[i][j];
      if (v < 0 || std::isnan(v)) throw DomainError("chi_square_independence: negative count");
      row_sum[i] += v;
      col_sum[j] += v;
      total += v;
    }
  }
  for (double s : row_sum)
    if (s <= 0) throw DomainError("chi_square_independence: zero row marginal");
  for (double s : col_sum)
    if (s <= 0) throw DomainError("chi_square_independence: zero column marginal");

  ChiSquareResult out;
  for (std::size_t i = 0; i < table.size(); ++i) {
    for (std::size_t j = 0; j < k; ++j) {
      const double expected = row_sum[i] * col_sum[j] / total;
      const double diff = table[i][j] - expected;
      out.statistic += diff * diff / expected;
    }
  }
  out.degrees_of_freedom = static_cast<int>((table.size() - 1) * (k - 1));
  out.p_value = chi_square_sf(out.statistic, out.degrees_of_freedom);
  return out;
}

}  // namespace rankmetrics
