#include <gtest/gtest.h>

#include <filesystem>

#include "test_support.hpp"

namespace rankmetrics {
namespace {

namespace fs = std::filesystem;

TEST(Formatting, Cells) {
  EXPECT_EQ(detail::render_text_cell(Cell::count_share(10764, 35.14)), "10,764 (35.1%)");
  EXPECT_EQ(detail::render_text_cell(Cell::fixed(0.5604, 3)), "0.560");
  EXPECT_EQ(detail::render_text_cell(Cell::share_index(39.1, 1.0512)), "39.1 (1.05)");
  EXPECT_EQ(detail::render_text_cell(Cell::out_of(8, 176)), "8 out of 176");
  EXPECT_EQ(detail::render_text_cell(Cell::missing()), "-");
  EXPECT_EQ(format_fixed(0.125, 2), "0.13");
  EXPECT_EQ(format_fixed(-0.0001, 2), "0.00");
}

Table sample() {
  Table t{"T9", "Sample", "t09_sample"};
  t.columns = {{"UDA"}, {"FULL", {"count", "share"}}, {"Gini"}};
  t.rows = {{Cell::label("Math, x"), Cell::count_share(12, 40.0), Cell::fixed(0.25, 3)},
            {Cell::label("Total"), Cell::missing(), Cell::fixed(std::nullopt, 3)}};
  t.metadata = {{"config_hash", "abc"}};
  t.notes = {"a note"};
  return t;
}

TEST(Formatting, CsvRoundTrip) {
  const auto csv = format_table(sample(), TableFormat::Csv);
  const auto rows = parse_csv_table(csv);
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_EQ(rows[0].at("UDA"), "Math, x");
  EXPECT_EQ(rows[0].at("FULL_count"), "12");
  EXPECT_EQ(rows[0].at("FULL_share"), "40.0");
  EXPECT_EQ(rows[0].at("Gini"), "0.250");
  EXPECT_EQ(rows[1].at("FULL_count"), "");
  EXPECT_EQ(rows[1].at("Gini"), "");
  EXPECT_NE(format_table(sample(), TableFormat::Text).find("# note: a note"), std::string::npos);
  EXPECT_NE(format_table(sample(), TableFormat::Markdown).find("| UDA |"), std::string::npos);
}

TEST(Config, SectionsAndOverrides) {
  auto cfg = Config::parse("top_fraction = 0.3\n[run]\nsds-threshold = 0.4 # comment\n[weights]\nlife_science_udas = A, B\n");
  auto rc = RunConfig::from_config(cfg);
  EXPECT_DOUBLE_EQ(rc.top_fraction, 0.3);
  EXPECT_DOUBLE_EQ(rc.sds_threshold, 0.4);
  EXPECT_EQ(rc.schemes.positional_udas, (std::set<std::string>{"A", "B"}));
  const auto h = cfg.hash();
  cfg.set_override("sds_threshold", "0.6");
  EXPECT_DOUBLE_EQ(RunConfig::from_config(cfg).sds_threshold, 0.6);
  EXPECT_NE(cfg.hash(), h);
  EXPECT_THROW(Config::parse("[run\n"), ConfigError);
  EXPECT_THROW(Config::parse("novalue\n"), ConfigError);
  cfg.set_override("top_fraction", "1.5");
  EXPECT_THROW(RunConfig::from_config(cfg).validate(false), ConfigError);
  cfg.set_override("top_fraction", "abc");
  EXPECT_THROW(RunConfig::from_config(cfg), ConfigError);
}

struct PipelineFixture : ::testing::Test {
  fs::path dir = fs::temp_directory_path() / "rankmetrics_pipeline_test";
  RunConfig rc;
  void SetUp() override {
    fs::remove_all(dir);
    SynthConfig sc;
    sc.n_uda = 3;
    rc.inputs = write_synth_corpus(generate_corpus(sc), dir / "in");
  }
  void TearDown() override { fs::remove_all(dir); }
};

TEST_F(PipelineFixture, ByteIdenticalRerun) {
  rc.out_dir = (dir / "a").string();
  run_pipeline(rc);
  rc.out_dir = (dir / "b").string();
  run_pipeline(rc);
  std::size_t files = 0;
  for (const auto& e : fs::directory_iterator(dir / "a")) {
    ++files;
    EXPECT_EQ(read_file(e.path().string()), read_file((dir / "b" / e.path().filename()).string()))
        << e.path().filename();
  }
  EXPECT_GE(files, 15u);
  EXPECT_TRUE(fs::exists(dir / "a" / "t08_dominance.txt"));
  EXPECT_TRUE(fs::exists(dir / "a" / "indicators.csv"));
}

TEST_F(PipelineFixture, PlantedOrderingAppearsInTables) {
  const auto r = run_pipeline(rc);
  ASSERT_EQ(r.bundle.tables.size(), 11u);
  for (std::size_t i = 0; i < 3; ++i) {
    const auto avg = uda_rank_average(r.artifacts.percentiles[i], r.artifacts.corpus);
    if (kIndicators[i] == Indicator::Qi) continue;
    EXPECT_GT(*avg.total.by_rank[0], *avg.total.by_rank[2]);
  }
  EXPECT_EQ(r.bundle.tables[0].key, "T1");
  EXPECT_EQ(r.bundle.tables.back().key, "CHI");
}

TEST_F(PipelineFixture, MissingRankNotedInDominance) {
  // drop every assistant from the first SDS
  auto sci = load_corpus_files(rc.inputs.scientists, rc.inputs.publications, rc.inputs.authorships);
  const auto first_sds = sci.sds_to_uda().begin()->first;
  std::vector<Scientist> kept;
  for (const auto& s : sci.scientists())
    if (!(s.sds == first_sds && s.rank == Rank::Assistant)) kept.push_back(s);
  write_file(rc.inputs.scientists, scientists_to_csv(kept));
  // their bylines now name unknown scientists, so turn them into externals
  std::set<std::string> gone;
  for (const auto& s : sci.scientists())
    if (s.sds == first_sds && s.rank == Rank::Assistant) gone.insert(s.id);
  std::vector<Authorship> auth(sci.authorships().begin(), sci.authorships().end());
  for (auto& a : auth)
    if (a.scientist_id && gone.contains(*a.scientist_id)) a.scientist_id.reset();
  write_file(rc.inputs.authorships, authorships_to_csv(auth));

  const auto r = run_pipeline(rc);
  const auto& t8 = r.bundle.tables[7];
  EXPECT_EQ(t8.key, "T8");
  ASSERT_FALSE(t8.notes.empty());
  EXPECT_NE(t8.notes.front().find("excluded"), std::string::npos);
  EXPECT_NE(format_table(t8, TableFormat::Text).find("out of 8"), std::string::npos);
}

TEST_F(PipelineFixture, MissingInputsRejected) {
  rc.inputs.publications = (dir / "nope.csv").string();
  EXPECT_THROW(run_pipeline(rc), ConfigError);
  rc.inputs.publications.clear();
  EXPECT_THROW(run_pipeline(rc), ConfigError);
}

}  // namespace
}  // namespace rankmetrics
