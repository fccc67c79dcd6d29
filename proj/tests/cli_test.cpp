#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <string>

#include <sys/wait.h>

#include "test_support.hpp"

namespace rankmetrics {
namespace {

namespace fs = std::filesystem;

int run(const std::string& args) {
  const std::string cmd = std::string("\"") + RANKMETRICS_CLI_PATH + "\" " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

struct Cli : ::testing::Test {
  fs::path dir = fs::temp_directory_path() / "rankmetrics_cli_test";
  std::string in() const { return (dir / "in").string(); }
  std::string inputs() const {
    return "--scientists " + in() + "/scientists.csv --publications " + in() + "/publications.csv --authorships " +
           in() + "/authorships.csv";
  }
  void SetUp() override {
    fs::remove_all(dir);
    ASSERT_EQ(run("synth --out " + in() + " --n-uda 2 --seed 5"), 0);
  }
  void TearDown() override { fs::remove_all(dir); }
};

TEST_F(Cli, SubcommandsSucceed) {
  EXPECT_TRUE(fs::exists(dir / "in" / "scientists.csv"));
  EXPECT_EQ(run("validate " + inputs()), 0);
  const auto out = (dir / "ind").string();
  EXPECT_EQ(run("indicators " + inputs() + " --out " + out), 0);
  EXPECT_TRUE(fs::exists(dir / "ind" / "indicators.csv"));
  EXPECT_EQ(run("rank " + inputs() + " --indicators " + out + "/indicators.csv --out " + (dir / "rank").string()), 0);
  EXPECT_EQ(run("analyze " + inputs() + " --out " + (dir / "an").string()), 0);
  EXPECT_EQ(run("report " + inputs() + " --format csv --out " + (dir / "rep").string()), 0);
  EXPECT_TRUE(fs::exists(dir / "rep" / "report.csv"));
  EXPECT_TRUE(fs::exists(dir / "rep" / "t10_top_scientists.csv"));
}

TEST_F(Cli, ConfigFileAndOverride) {
  const auto cfg = (dir / "run.cfg").string();
  write_file(cfg, "[input]\nscientists = " + in() + "/scientists.csv\npublications = " + in() +
                      "/publications.csv\nauthorships = " + in() + "/authorships.csv\n[run]\ntop_fraction = 0.1\n");
  EXPECT_EQ(run("report --config " + cfg + " --top-fraction 0.25 --out " + (dir / "r").string()), 0);
  EXPECT_EQ(run("report --config " + cfg + " --top-fraction 2 --out " + (dir / "r").string()), 1);
}

TEST_F(Cli, BadInputExitsOne) {
  EXPECT_EQ(run("validate --scientists " + in() + "/missing.csv --publications " + in() +
                "/publications.csv --authorships " + in() + "/authorships.csv"),
            1);
  write_file(in() + "/publications.csv", "pub_id,year,citation_count,subject_categories,author_count\nP1,abc,0,C,1\n");
  EXPECT_EQ(run("validate " + inputs()), 1);
  EXPECT_EQ(run("report " + inputs() + " --format pdf"), 1);
  EXPECT_NE(run("no-such-command"), 0);
}

}  // namespace
}  // namespace rankmetrics
