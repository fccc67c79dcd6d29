#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>
#include <random>

#include "test_support.hpp"

namespace rankmetrics {
namespace {

using testing::CorpusSpec;

void expect_weights(const std::vector<double>& got, const std::vector<double>& want) {
  ASSERT_EQ(got.size(), want.size());
  for (std::size_t i = 0; i < got.size(); ++i) EXPECT_NEAR(got[i], want[i], 1e-15) << "position " << i + 1;
}

TEST(CoauthorWeights, SameUniversityEndsFiveAuthors) {
  const double mid = 0.20 / 3.0;
  expect_weights(coauthor_weights(5, BylineCase::SameUniversityEnds, WeightScheme::Positional),
                 {0.40, mid, mid, mid, 0.40});
}

TEST(CoauthorWeights, SeparateBoundaryPairsSixAuthors) {
  expect_weights(coauthor_weights(6, BylineCase::SeparateBoundaryPairs, WeightScheme::Positional),
                 {0.30, 0.15, 0.05, 0.05, 0.15, 0.30});
}

TEST(CoauthorWeights, SoleAuthorAndEqual) {
  for (auto c : {BylineCase::SameUniversityEnds, BylineCase::SeparateBoundaryPairs, BylineCase::Unclassified})
    for (auto s : {WeightScheme::Equal, WeightScheme::Positional}) expect_weights(coauthor_weights(1, c, s), {1.0});
  expect_weights(coauthor_weights(4, BylineCase::SameUniversityEnds, WeightScheme::Equal), {0.25, 0.25, 0.25, 0.25});
  expect_weights(coauthor_weights(4, BylineCase::Unclassified, WeightScheme::Positional), {0.25, 0.25, 0.25, 0.25});
}

TEST(CoauthorWeights, ShortBylinesRenormalize) {
  // roles cover every slot, so nominal role weights are rescaled to sum 1
  expect_weights(coauthor_weights(2, BylineCase::SameUniversityEnds, WeightScheme::Positional), {0.5, 0.5});
  expect_weights(coauthor_weights(4, BylineCase::SeparateBoundaryPairs, WeightScheme::Positional),
                 {1.0 / 3, 1.0 / 6, 1.0 / 6, 1.0 / 3});
  expect_weights(coauthor_weights(3, BylineCase::SeparateBoundaryPairs, WeightScheme::Positional),
                 {1.0 / 3, 1.0 / 3, 1.0 / 3});
  // three authors, same-university ends: the middle author takes the 20%
  expect_weights(coauthor_weights(3, BylineCase::SameUniversityEnds, WeightScheme::Positional), {0.4, 0.2, 0.4});
}

TEST(CoauthorWeights, ZeroAuthorsRejected) {
  EXPECT_THROW(coauthor_weights(0, BylineCase::Unclassified, WeightScheme::Equal), DomainError);
}

TEST(CoauthorWeights, SumToOneEverywhere) {
  for (std::size_t n = 1; n <= 50; ++n)
    for (auto c : {BylineCase::SameUniversityEnds, BylineCase::SeparateBoundaryPairs, BylineCase::Unclassified})
      for (auto s : {WeightScheme::Equal, WeightScheme::Positional}) {
        const auto w = coauthor_weights(n, c, s);
        ASSERT_EQ(w.size(), n);
        EXPECT_NEAR(std::accumulate(w.begin(), w.end(), 0.0), 1.0, 1e-12) << "n=" << n;
        for (double x : w) EXPECT_GT(x, 0.0);
      }
}

using Aff = std::vector<std::optional<std::string>>;

TEST(ClassifyByline, Cases) {
  EXPECT_EQ(classify_byline(Aff{"A", "B", "C", "A"}), BylineCase::SameUniversityEnds);
  EXPECT_EQ(classify_byline(Aff{"A", "B", "X", "C", "D"}), BylineCase::SeparateBoundaryPairs);
  EXPECT_EQ(classify_byline(Aff{"A", "A", "X", "C", "C"}), BylineCase::SeparateBoundaryPairs);
  // second author shares the last author's university: neither rule applies
  EXPECT_EQ(classify_byline(Aff{"A", "C", "X", "D", "C"}), BylineCase::Unclassified);
  // missing boundary affiliation
  EXPECT_EQ(classify_byline(Aff{"A", std::nullopt, "X", "D", "A"}), BylineCase::Unclassified);
  EXPECT_EQ(classify_byline(Aff{"A", "B", std::nullopt, "D", "E"}), BylineCase::SeparateBoundaryPairs);
  EXPECT_EQ(classify_byline(Aff{"A", "B"}), BylineCase::Unclassified);
  EXPECT_EQ(classify_byline(Aff{"A", "A"}), BylineCase::SameUniversityEnds);
}

// ---------------------------------------------------------------------------

TEST(ComputeIndicators, InactiveScientist) {
  CorpusSpec spec;
  spec.scientist("A", "S", "U", Rank::Full).scientist("B", "S", "U", Rank::Full).publication("P", 2005, 3, {"C"}, {"A"});
  const auto c = spec.build();
  const auto r = compute_indicators(c, build_baselines(c));
  EXPECT_EQ(r[1].scientist_id, "B");
  EXPECT_EQ(r[1].n_p, 0);
  EXPECT_FALSE(r[1].qi.has_value());
  EXPECT_EQ(r[1].fss, 0.0);
}

TEST(ComputeIndicators, SoleAuthor) {
  CorpusSpec spec;
  spec.scientist("A", "S", "U", Rank::Full).publication("P", 2005, 6, {"C"}, {"A"});
  BaselineTable t;
  t.insert({2005, "C", 2.0, 2.0, 1});
  const auto r = compute_indicators(spec.build(), t);
  EXPECT_EQ(r[0].n_p, 1);
  EXPECT_DOUBLE_EQ(*r[0].qi, 3.0);
  EXPECT_DOUBLE_EQ(r[0].fss, 3.0);
}

TEST(ComputeIndicators, FractionalEqualCredit) {
  CorpusSpec spec;
  spec.scientist("A", "S", "U", Rank::Full)
      .publication("P1", 2005, 4, {"C"}, {"A", ""})
      .publication("P2", 2006, 8, {"C"}, {"", "", "A", ""});
  BaselineTable t;
  t.insert({2005, "C", 2.0, 2.0, 1});
  t.insert({2006, "C", 2.0, 2.0, 1});
  const auto r = compute_indicators(spec.build(), t);
  EXPECT_EQ(r[0].n_p, 2);
  EXPECT_DOUBLE_EQ(*r[0].qi, 3.0);
  EXPECT_DOUBLE_EQ(r[0].fss, 2.0);  // 2/2 + 4/4
}

TEST(ComputeIndicators, MissingBaselinePropagates) {
  CorpusSpec spec;
  spec.scientist("A", "S", "U", Rank::Full).publication("P", 2005, 6, {"C"}, {"A"});
  EXPECT_THROW(compute_indicators(spec.build(), BaselineTable{}), BaselineError);
}

TEST(ComputeIndicators, PositionalSchemeFollowsUda) {
  CorpusSpec spec;
  spec.scientist("L", "BIO/1", "BIO", Rank::Full)
      .scientist("M", "MAT/1", "MAT", Rank::Full)
      .publication("P", 2005, 10, {"C"}, {"L", "", "", "", "M"}, {"U1", "U2", "U3", "U4", "U1"});
  BaselineTable t;
  t.insert({2005, "C", 5.0, 5.0, 1});
  WeightSchemeConfig cfg{{"BIO"}};
  const auto r = compute_indicators(spec.build(), t, cfg);
  EXPECT_NEAR(r[0].fss, 2.0 * 0.40, 1e-15);  // life-science scientist, first author
  EXPECT_NEAR(r[1].fss, 2.0 * 0.20, 1e-15);  // equal weights elsewhere
}

TEST(ComputeIndicators, CreditOverBylineSumsToScore) {
  SynthConfig sc;
  sc.n_uda = 2;
  sc.coauthor_share = 0.3;
  const auto c = generate_corpus(sc).to_corpus();
  const auto t = build_baselines(c);
  for (std::size_t p = 0; p < c.publications().size(); ++p) {
    const double score = standardize_publication(c.publications()[p], t);
    for (auto scheme : {WeightScheme::Equal, WeightScheme::Positional}) {
      double credited = 0.0;
      for (double w : byline_weights(c, p, scheme)) credited += score * w;
      ASSERT_NEAR(credited, score, 1e-12);
    }
  }
}

TEST(ComputeIndicators, InvariantToPublicationOrderAndMiddlePermutation) {
  CorpusSpec spec;
  spec.scientist("A", "S", "U", Rank::Full).scientist("B", "S", "U", Rank::Full);
  spec.publication("P1", 2005, 4, {"C"}, {"A", "", "B", "", ""}, {"U1", "U2", "U3", "U4", "U1"});
  spec.publication("P2", 2006, 9, {"C"}, {"B", "A"}, {"U1", "U2"});
  spec.publication("P3", 2006, 1, {"C"}, {"A"}, {"U1"});
  WeightSchemeConfig cfg{{"U"}};
  const auto base = spec.build();
  const auto r1 = compute_indicators(base, build_baselines(base), cfg);

  auto reordered = spec;
  std::reverse(reordered.publications.begin(), reordered.publications.end());
  // move B among the middle authors of P1 (same-university ends)
  for (auto& a : reordered.authorships)
    if (a.pub_id == "P1" && a.position == 3) a.position = 2;
    else if (a.pub_id == "P1" && a.position == 2) a.position = 3;
  const auto c2 = reordered.build();
  const auto r2 = compute_indicators(c2, build_baselines(c2), cfg);
  for (std::size_t i = 0; i < 2; ++i) {
    EXPECT_EQ(r1[i].n_p, r2[i].n_p);
    EXPECT_NEAR(*r1[i].qi, *r2[i].qi, 1e-15);
    EXPECT_NEAR(r1[i].fss, r2[i].fss, 1e-15);
  }
}

TEST(ComputeIndicators, SoleAuthoredEqualScores) {
  CorpusSpec spec;
  spec.scientist("A", "S", "U", Rank::Full);
  for (int i = 0; i < 7; ++i) spec.publication("P" + std::to_string(i), 2005, 5, {"C"}, {"A"});
  spec.publication("Q", 2005, 1, {"C"}, {""});
  const auto c = spec.build();
  const auto r = compute_indicators(c, build_baselines(c));
  EXPECT_DOUBLE_EQ(r[0].fss, static_cast<double>(r[0].n_p) * *r[0].qi);
}

TEST(IndicatorExport, RoundTripAndAbsentQi) {
  std::vector<IndicatorRecord> recs{{"A", 3, 1.25, 0.5}, {"B", 0, std::nullopt, 0.0}, {"C", 1, 0.1 + 0.2, 1e-7}};
  const auto csv = indicators_to_csv(recs);
  EXPECT_NE(csv.find("B,0,,0\n"), std::string::npos) << csv;
  const auto back = indicators_from_records(parse_records(csv));
  ASSERT_EQ(back.size(), recs.size());
  for (std::size_t i = 0; i < recs.size(); ++i) {
    EXPECT_EQ(back[i].scientist_id, recs[i].scientist_id);
    EXPECT_EQ(back[i].n_p, recs[i].n_p);
    EXPECT_EQ(back[i].qi, recs[i].qi);
    EXPECT_EQ(back[i].fss, recs[i].fss);
  }
  EXPECT_THROW(indicators_from_records(parse_records("scientist_id,n_p,qi,fss\nX,0,1.0,0\n")), CorpusError);
}

}  // namespace
}  // namespace rankmetrics
