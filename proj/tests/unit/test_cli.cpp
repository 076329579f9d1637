#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <regex>
#include <sstream>
#include <string>
#include <vector>

#include "pcfpair/cli/app.hpp"

namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::vector<std::string> lines(const fs::path& p) {
  std::ifstream in(p);
  std::vector<std::string> out;
  for (std::string l; std::getline(in, l);) out.push_back(l);
  return out;
}

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("pcfpair_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
    config_ = (dir_ / "small.yaml").string();
    std::ofstream(config_) << "schema_version: 1\njsi: {grid_points: 64}\nsimulation: {pulses: 2000000}\n";
  }
  void TearDown() override { fs::remove_all(dir_); }

  int run(std::vector<std::string> args, bool small = true) {
    std::vector<std::string> full{"pcfpair"};
    if (small) full.insert(full.end(), {"--config", config_});
    full.insert(full.end(), {"--out", dir_.string()});
    full.insert(full.end(), args.begin(), args.end());
    out_.str("");
    err_.str("");
    return pcfpair::cli::run(full, out_, err_);
  }

  fs::path dir_;
  std::string config_;
  std::ostringstream out_, err_;
};

TEST_F(Cli, ZdwPrintsJsonAndWritesFile) {
  ASSERT_EQ(run({"zdw", "--pressure", "1.0"}), pcfpair::cli::kExitOk) << err_.str();
  EXPECT_NE(out_.str().find("\"lambda_zdw_nm\""), std::string::npos);
  const auto json = slurp(dir_ / "zdw.json");
  EXPECT_EQ(json.find("\"provenance\""), json.find('"'));
}

TEST_F(Cli, ExitCodes) {
  EXPECT_EQ(run({"tuning-curve", "--pmin", "1.4", "--pmax", "0.8"}), pcfpair::cli::kExitUsage);
  EXPECT_EQ(run({"zdw", "--pressure", "0.79", "--bracket", "800", "1300"}), pcfpair::cli::kExitNoSolution);
  EXPECT_NE(err_.str().find("no solution"), std::string::npos);
  EXPECT_EQ(run({"jsi", "--idler-window", "600", "700"}), pcfpair::cli::kExitDomain);
  EXPECT_NE(err_.str().find("leg idler"), std::string::npos);
  EXPECT_EQ(run({"frobnicate"}), pcfpair::cli::kExitUsage);
  EXPECT_EQ(run({"zdw", "--variant", "sideways"}), pcfpair::cli::kExitUsage);
  EXPECT_EQ(run({"--version"}), pcfpair::cli::kExitOk);
}

TEST_F(Cli, CsvCarriesProvenanceHeader) {
  ASSERT_EQ(run({"tuning-curve", "--pmin", "0.79", "--pmax", "0.89", "--step", "0.05"}), 0) << err_.str();
  const auto l = lines(dir_ / "tuning_curve_resonant.csv");
  ASSERT_GE(l.size(), 5u);
  EXPECT_TRUE(std::regex_match(l[0], std::regex(R"(# pcfpair \S+ config-sha1 [0-9a-f]{40})"))) << l[0];
  EXPECT_EQ(l[1], "pressure_bar,lambda_s_nm,lambda_i_nm,residual,variant,roots");
  EXPECT_EQ(l.size(), 2u + 3u);
  EXPECT_EQ(l[2].rfind("0.79,", 0), 0u);
}

TEST_F(Cli, BaselineCurveDiffers) {
  ASSERT_EQ(run({"tuning-curve", "--pmin", "1.0", "--pmax", "1.1"}), 0);
  ASSERT_EQ(run({"tuning-curve", "--pmin", "1.0", "--pmax", "1.1", "--variant", "baseline"}), 0);
  auto r = lines(dir_ / "tuning_curve_resonant.csv");
  auto b = lines(dir_ / "tuning_curve_baseline.csv");
  ASSERT_EQ(r.size(), b.size());
  EXPECT_NE(r[2], b[2]);
}

TEST_F(Cli, FilteredRatesSortsBandwidths) {
  ASSERT_EQ(run({"filtered-rates", "--bandwidths", "40", "5", "20"}), 0) << err_.str();
  auto l = lines(dir_ / "filtered_rates.csv");
  ASSERT_EQ(l.size(), 5u);
  EXPECT_EQ(l[2].rfind("5,", 0), 0u);
  EXPECT_EQ(l[3].rfind("20,", 0), 0u);
  EXPECT_EQ(l[4].rfind("40,1,1", 0), 0u);

  ASSERT_EQ(run({"filtered-rates", "--bandwidths", "30"}), 0);
  l = lines(dir_ / "filtered_rates.csv");
  ASSERT_EQ(l.size(), 3u);
  EXPECT_EQ(l[2], "30,1,1");
}

TEST_F(Cli, RerunsAreByteIdentical) {
  const std::vector<std::vector<std::string>> commands = {
      {"montecarlo", "--seed", "5", "--pulses", "3000000"},
      {"jsi"},
      {"transmittance", "--points", "301"},
      {"power-sweep", "--powers", "40", "140", "--pulses", "1000000"},
  };
  const std::vector<std::vector<std::string>> files = {
      {"histogram.csv", "montecarlo.json"},
      {"jsi_matrix.csv", "jsi_marginals.csv", "jsi.json"},
      {"transmittance.csv", "transmittance.json"},
      {"power_sweep.csv", "power_sweep.json"},
  };
  for (std::size_t k = 0; k < commands.size(); ++k) {
    ASSERT_EQ(run(commands[k]), 0) << err_.str();
    std::vector<std::string> first;
    for (const auto& f : files[k]) first.push_back(slurp(dir_ / f));
    ASSERT_EQ(run(commands[k]), 0);
    for (std::size_t j = 0; j < files[k].size(); ++j) {
      EXPECT_FALSE(first[j].empty()) << files[k][j];
      EXPECT_EQ(first[j], slurp(dir_ / files[k][j])) << files[k][j];
    }
  }
}

TEST_F(Cli, ThreadCountDoesNotChangeOutput) {
  ASSERT_EQ(run({"--threads", "1", "montecarlo", "--seed", "2", "--pulses", "3000000"}), 0);
  const auto one = slurp(dir_ / "histogram.csv");
  ASSERT_EQ(run({"--threads", "3", "montecarlo", "--seed", "2", "--pulses", "3000000"}), 0);
  // The command line differs, the data does not.
  auto strip = [](const std::string& s) { return s.substr(s.find('\n')); };
  EXPECT_EQ(strip(one), strip(slurp(dir_ / "histogram.csv")));
}

TEST_F(Cli, BundledConfigLoadsByDefault) {
  EXPECT_TRUE(fs::exists(pcfpair::cli::default_config_path()));
  ASSERT_EQ(run({"zdw"}, false), 0) << err_.str();
}

}  // namespace
