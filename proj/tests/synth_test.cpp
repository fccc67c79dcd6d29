#include <gtest/gtest.h>

#include <filesystem>

#include "test_support.hpp"

namespace rankmetrics {
namespace {

std::string dump(const SynthCorpus& c) {
  return scientists_to_csv(c.scientists) + publications_to_csv(c.publications) + authorships_to_csv(c.authorships);
}

SynthConfig small() {
  SynthConfig c;
  c.n_uda = 2;
  c.sds_per_uda = 2;
  c.scientists_per_sds = {10, 10, 10};
  return c;
}

TEST(Synth, DeterministicForSeed) {
  const auto a = dump(generate_corpus(small()));
  EXPECT_EQ(a, dump(generate_corpus(small())));
  auto other = small();
  other.seed += 1;
  EXPECT_NE(a, dump(generate_corpus(other)));
}

TEST(Synth, RosterShape) {
  const auto s = generate_corpus(small());
  EXPECT_EQ(s.scientists.size(), 2u * 2 * 30);
  const auto c = s.to_corpus();
  EXPECT_EQ(c.udas().size(), 2u);
  EXPECT_EQ(c.sds_to_uda().size(), 4u);
}

TEST(Synth, PlantedEffectsAndInactiveShare) {
  SynthConfig cfg;
  cfg.n_uda = 1;
  cfg.sds_per_uda = 1;
  cfg.scientists_per_sds = {500, 500, 500};
  const auto c = generate_corpus(cfg).to_corpus();
  const auto recs = compute_indicators(c, build_baselines(c));
  std::array<double, 3> pubs{}, count{}, inactive{};
  for (std::size_t i = 0; i < recs.size(); ++i) {
    const auto r = rank_index(c.scientists()[*c.find_scientist(recs[i].scientist_id)].rank);
    pubs[r] += static_cast<double>(recs[i].n_p);
    count[r] += 1;
    if (recs[i].n_p == 0) inactive[r] += 1;
  }
  EXPECT_GT(pubs[0] / count[0], pubs[2] / count[2]);
  EXPECT_NEAR(100.0 * inactive[2] / count[2], 20.0, 3.0);
  EXPECT_NEAR(100.0 * inactive[0] / count[0], 8.0, 3.0);
}

TEST(Synth, WrittenCorpusLoadsAndBaselinesAreSkewed) {
  const auto dir = std::filesystem::temp_directory_path() / "rankmetrics_synth_test";
  std::filesystem::remove_all(dir);
  const auto s = generate_corpus(SynthConfig{});
  const auto paths = write_synth_corpus(s, dir);
  const auto c = load_corpus_files(paths.scientists, paths.publications, paths.authorships);
  EXPECT_EQ(c.scientists().size(), s.scientists.size());
  EXPECT_EQ(c.publications().size(), s.publications.size());
  const auto t = build_baselines(c);
  std::size_t skewed = 0;
  for (const auto& [key, cell] : t.cells()) skewed += cell.median_citations <= cell.mean_citations;
  EXPECT_GE(static_cast<double>(skewed), 0.95 * static_cast<double>(t.size()));
  std::filesystem::remove_all(dir);
}

TEST(Synth, InvalidFieldNamed) {
  auto cfg = small();
  cfg.n_uda = 0;
  try {
    generate_corpus(cfg);
    FAIL() << "expected ConfigError";
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("n_uda"), std::string::npos);
  }
  cfg = small();
  cfg.inactive_fraction[2] = 1.5;
  EXPECT_THROW(generate_corpus(cfg), ConfigError);
}

TEST(Synth, ReadsConfigSection) {
  auto cfg = Config::parse("[synth]\nseed = 17\nn-uda = 4\nassistant_per_sds = 7\n");
  cfg.set_override("sds_per_uda", "5");
  const auto sc = SynthConfig::from_config(cfg);
  EXPECT_EQ(sc.seed, 17u);
  EXPECT_EQ(sc.n_uda, 4);
  EXPECT_EQ(sc.sds_per_uda, 5);
  EXPECT_EQ(sc.scientists_per_sds[2], 7);
}

}  // namespace
}  // namespace rankmetrics
