#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "test_support.hpp"

namespace rankmetrics {
namespace {

using testing::CorpusSpec;

std::vector<double> pct(std::vector<double> v) { return percentiles_of(v); }

TEST(Percentiles, SimpleExamples) {
  EXPECT_EQ(pct({1, 2, 3}), (std::vector<double>{0, 50, 100}));
  EXPECT_EQ(pct({5, 5}), (std::vector<double>{50, 50}));
  EXPECT_EQ(pct({42}), (std::vector<double>{100}));
  EXPECT_TRUE(pct({}).empty());
  EXPECT_EQ(pct({3, 1, 1, 9}), (std::vector<double>{200.0 / 3, 50.0 / 3, 50.0 / 3, 100}));
}

TEST(Percentiles, MatchesCountingOracleWithTies) {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 2 + rng() % 60;
    auto v = testing::random_values_with_ties(rng, n);
    const auto p = percentiles_of(v);
    double sum = 0;
    for (std::size_t i = 0; i < n; ++i) {
      const double want = 100.0 * (testing::counting_midrank(v, i) - 1.0) / static_cast<double>(n - 1);
      ASSERT_NEAR(p[i], want, 1e-9);
      ASSERT_GE(p[i], 0.0);
      ASSERT_LE(p[i], 100.0);
      sum += p[i];
    }
    EXPECT_NEAR(sum / static_cast<double>(n), 50.0, 1e-9);
  }
}

TEST(Percentiles, InvariantUnderMonotoneTransform) {
  std::mt19937_64 rng(11);
  auto v = testing::random_values_with_ties(rng, 80);
  std::vector<double> w;
  for (double x : v) w.push_back(std::exp(x / 10.0) + 3.0);
  EXPECT_EQ(percentiles_of(v), percentiles_of(w));
}

TEST(TopFlags, Counts) {
  EXPECT_EQ(top_count(10, 0.2), 2u);
  EXPECT_EQ(top_count(3, 0.2), 1u);
  EXPECT_EQ(top_count(5, 0.2), 1u);
  EXPECT_EQ(top_count(15, 0.2), 3u);
  std::vector<double> ten{1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
  auto f = top_flags(ten, 0.2);
  EXPECT_EQ(std::count(f.begin(), f.end(), true), 2);
  EXPECT_TRUE(f[8] && f[9]);
}

TEST(TopFlags, TiesAtCutoffIncluded) {
  std::vector<double> v{9, 7, 7, 1, 0};
  EXPECT_EQ(top_flags(v, 0.2), (std::vector<bool>{true, false, false, false, false}));
  std::vector<double> w{7, 9, 9, 1, 0};
  EXPECT_EQ(top_flags(w, 0.2), (std::vector<bool>{false, true, true, false, false}));
  EXPECT_THROW(top_flags(v, 0.0), DomainError);
  EXPECT_THROW(top_flags(v, 1.0), DomainError);
}

TEST(SdsPercentiles, PopulationsPerIndicator) {
  CorpusSpec spec;
  spec.scientist("A", "S1", "U", Rank::Full)
      .scientist("B", "S1", "U", Rank::Associate)
      .scientist("C", "S1", "U", Rank::Assistant)
      .scientist("D", "S2", "U", Rank::Full);
  const auto c = spec.build();
  std::vector<IndicatorRecord> recs{{"A", 2, 1.5, 3.0}, {"B", 1, 0.5, 0.5}, {"C", 0, std::nullopt, 0.0}, {"D", 1, 2.0, 2.0}};

  const auto fss = sds_percentiles(c, recs, Indicator::Fss);
  ASSERT_EQ(fss.size(), 4u);
  EXPECT_DOUBLE_EQ(fss[0].percentile, 100.0);
  EXPECT_DOUBLE_EQ(fss[1].percentile, 50.0);
  EXPECT_DOUBLE_EQ(fss[2].percentile, 0.0);
  EXPECT_DOUBLE_EQ(fss[3].percentile, 100.0);  // alone in S2

  const auto qi = sds_percentiles(c, recs, Indicator::Qi);
  ASSERT_EQ(qi.size(), 3u);
  for (const auto& p : qi) EXPECT_NE(p.scientist_id, "C");
  EXPECT_DOUBLE_EQ(qi[0].percentile, 100.0);
  EXPECT_DOUBLE_EQ(qi[1].percentile, 0.0);

  const auto top_qi = top_scientists(c, recs, Indicator::Qi, 0.2);
  ASSERT_EQ(top_qi.size(), 3u);
  for (const auto& f : top_qi) EXPECT_NE(f.scientist_id, "C");
  const auto top_np = top_scientists(c, recs, Indicator::Np, 0.2);
  ASSERT_EQ(top_np.size(), 4u);
  EXPECT_TRUE(top_np[0].is_top);
  EXPECT_FALSE(top_np[2].is_top);
}

TEST(UdaRankAverage, MeansAndEmptyCells) {
  CorpusSpec spec;
  spec.scientist("A", "S1", "U", Rank::Full).scientist("B", "S1", "U", Rank::Full).scientist("C", "S2", "V", Rank::Assistant);
  const auto c = spec.build();
  std::vector<PercentileRecord> p{{"A", Indicator::Fss, 0.0, "S1", Rank::Full},
                                  {"B", Indicator::Fss, 100.0, "S1", Rank::Full},
                                  {"C", Indicator::Fss, 100.0, "S2", Rank::Assistant}};
  const auto t = uda_rank_average(p, c);
  EXPECT_EQ(t.indicator, Indicator::Fss);
  ASSERT_EQ(t.rows.size(), 2u);
  EXPECT_DOUBLE_EQ(*t.rows[0].by_rank[0], 50.0);
  EXPECT_FALSE(t.rows[0].by_rank[2].has_value());
  EXPECT_FALSE(t.rows[1].by_rank[0].has_value());
  EXPECT_DOUBLE_EQ(*t.total.by_rank[0], 50.0);
  EXPECT_DOUBLE_EQ(*t.total.by_rank[2], 100.0);
}

TEST(UdaRankAverage, PlantedRankEffectOrdersRanks) {
  SynthConfig sc;
  sc.n_uda = 3;
  sc.rank_effect = {1.6, 1.25, 1.0};
  const auto c = generate_corpus(sc).to_corpus();
  const auto recs = compute_indicators(c, build_baselines(c));
  for (auto ind : {Indicator::Np, Indicator::Fss}) {
    const auto t = uda_rank_average(sds_percentiles(c, recs, ind), c);
    EXPECT_GT(*t.total.by_rank[0], *t.total.by_rank[2]) << to_string(ind);
  }
}

TEST(PercentileExport, RoundTrip) {
  CorpusSpec spec;
  spec.scientist("A", "S1", "U", Rank::Full).scientist("B", "S1", "U", Rank::Assistant);
  const auto c = spec.build();
  std::vector<IndicatorRecord> recs{{"A", 2, 1.5, 3.0}, {"B", 1, 0.5, 0.5}};
  const auto p = sds_percentiles(c, recs, Indicator::Qi);
  const auto back = percentiles_from_records(parse_records(percentiles_to_csv(p)), c);
  ASSERT_EQ(back.size(), p.size());
  for (std::size_t i = 0; i < p.size(); ++i) {
    EXPECT_EQ(back[i].scientist_id, p[i].scientist_id);
    EXPECT_EQ(back[i].indicator, p[i].indicator);
    EXPECT_EQ(back[i].percentile, p[i].percentile);
    EXPECT_EQ(back[i].rank, p[i].rank);
  }
}

}  // namespace
}  // namespace rankmetrics
