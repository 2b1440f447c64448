#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <gtest/gtest.h>

#include "json.hpp"

namespace fs = std::filesystem;

namespace {

int run_cli(const std::string& args) {
  const std::string cmd = std::string(AWDG_CLI_PATH) + " " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("awdg_cli_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

fs::path write_config(const fs::path& dir, const std::string& text) {
  const fs::path p = dir / "config.json";
  std::ofstream(p) << text;
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream is(p, std::ios::binary);
  std::stringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

}  // namespace

TEST(Cli, RunWritesArtifacts) {
  const auto dir = scratch("run");
  const auto cfg = write_config(dir, R"({"n": 20, "q": 2})");
  ASSERT_EQ(run_cli("--config " + cfg.string() + " --output " + (dir / "out").string() + " run"), 0);
  const auto csv = slurp(dir / "out" / "run.csv");
  EXPECT_EQ(csv.rfind("step,t,energy,err_u,err_v\n", 0), 0u);
  const auto summary = nlohmann::json::parse(slurp(dir / "out" / "summary.json"));
  EXPECT_TRUE(summary["err_u"].is_number());
  EXPECT_LT(summary["err_u"].get<double>(), 1e-2);
  EXPECT_EQ(summary["config"]["q"], 2);
}

TEST(Cli, RerunIsByteIdentical) {
  const auto dir = scratch("repeat");
  const auto cfg = write_config(dir, R"({"n_list": [8, 12, 16], "q": 2, "T": 0.1})");
  for (const char* sub : {"a", "b"})
    ASSERT_EQ(run_cli("--config " + cfg.string() + " --output " + (dir / sub).string() + " --workers 2 converge"), 0);
  EXPECT_EQ(slurp(dir / "a" / "errors.csv"), slurp(dir / "b" / "errors.csv"));
  EXPECT_EQ(slurp(dir / "a" / "rates.csv"), slurp(dir / "b" / "rates.csv"));
  EXPECT_EQ(slurp(dir / "a" / "rates.csv").rfind("q,s,flux,w,c,rate_u,rate_v\n", 0), 0u);
}

TEST(Cli, SummaryConfigReproducesRun) {
  const auto dir = scratch("roundtrip");
  const auto cfg = write_config(dir, R"({"n": 12, "q": 3, "flux": "central", "T": 0.05})");
  ASSERT_EQ(run_cli("--config " + cfg.string() + " --output " + (dir / "a").string() + " run"), 0);
  const auto summary = nlohmann::json::parse(slurp(dir / "a" / "summary.json"));
  auto again = summary["config"];
  again["output_dir"] = (dir / "b").string();
  std::ofstream(dir / "again.json") << again.dump();
  ASSERT_EQ(run_cli("--config " + (dir / "again.json").string() + " run"), 0);
  EXPECT_EQ(slurp(dir / "a" / "run.csv"), slurp(dir / "b" / "run.csv"));
}

TEST(Cli, ConfigErrorsExitWithTwo) {
  const auto dir = scratch("bad");
  EXPECT_EQ(run_cli("--config " + write_config(dir, R"({"c": 0, "w": 0})").string() + " spectrum"), 2);
  EXPECT_EQ(run_cli("--config " + write_config(dir, R"({"q": "two"})").string() + " run"), 2);
  EXPECT_EQ(run_cli("--config " + write_config(dir, "{not json").string() + " run"), 2);
  EXPECT_EQ(run_cli("--config " + write_config(dir, R"({"n_list": [10, 20]})").string() + " converge"), 2);
  EXPECT_EQ(run_cli("frobnicate"), 2);
}

TEST(Cli, InstabilityExitsWithThree) {
  const auto dir = scratch("unstable");
  const auto cfg = write_config(dir, R"({"n": 10, "q": 3, "cfl": 3.0, "T": 100})");
  EXPECT_EQ(run_cli("--config " + cfg.string() + " --output " + dir.string() + " run"), 3);
}

TEST(Cli, EnergyAndSpectrum) {
  const auto dir = scratch("energy");
  const auto cfg = write_config(dir, R"({"n": 8, "n_list": [8, 16], "q": 2})");
  EXPECT_EQ(run_cli("--config " + cfg.string() + " --output " + dir.string() + " energy"), 0);
  EXPECT_EQ(run_cli("--config " + cfg.string() + " --output " + dir.string() + " --seed 5 spectrum"), 0);
  const auto csv = slurp(dir / "spectrum.csv");
  EXPECT_EQ(csv.rfind("q,n,h,radius,converged\n", 0), 0u);
}
