// Runs the bench executable and checks exit codes and outputs.

#include "tnav/bench/config.hpp"

#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace fs = std::filesystem;

namespace {

int run(const std::string& args, const std::string& env = "") {
  const std::string cmd = env + " " + TNAV_BENCH_EXE + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

fs::path tmp(const std::string& name) {
  auto p = fs::temp_directory_path() / ("tnav_cli_test_" + name);
  fs::remove_all(p);
  return p;
}

fs::path write(const std::string& name, const std::string& text) {
  auto p = tmp(name);
  std::ofstream(p) << text;
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

const char* kTiny = R"({"offline": {"n_phi": 5, "n_theta": 3}, "sensor": {"resolution": 4.0},
  "benchmark": {"seed": 5, "output_dir": "/nonexistent/should/not/be/used",
                "maps": [{"type": "empty", "trials": 2}]}})";

}  // namespace

TEST(Cli, UsageErrors) {
  EXPECT_EQ(run(""), 1);
  EXPECT_EQ(run("frobnicate"), 1);
  EXPECT_EQ(run("run"), 1);
  EXPECT_EQ(run("map gen"), 1);
  EXPECT_EQ(run("map gen hexagon 1 " + tmp("x.map").string()), 1);
  EXPECT_EQ(run("--help"), 0);
}

TEST(Cli, ConfigAndIoErrors) {
  EXPECT_EQ(run("run " + write("bad.json", R"({"offline": {"tau_P": 0.35, "tau_S": 0.3}})").string()), 2);
  EXPECT_EQ(run("run " + write("odd.json", R"({"offline": {"n_v": 55}})").string()), 2);
  EXPECT_EQ(run("run " + write("broken.json", "{\"offline\": ").string()), 3);
  EXPECT_EQ(run("run /nonexistent/config.json"), 3);
  EXPECT_EQ(run("replay /nonexistent/trace -m /nonexistent/map"), 3);
}

TEST(Cli, RunHonoursEnvironmentAndSeedOverride) {
  const auto cfg = write("tiny.json", kTiny);
  const auto a = tmp("out_a");
  const auto b = tmp("out_b");
  const auto c = tmp("out_c");
  ASSERT_EQ(run("run -q " + cfg.string(), "TNAV_OUT_DIR=" + a.string()), 0);
  ASSERT_EQ(run("run -q " + cfg.string(), "TNAV_OUT_DIR=" + b.string()), 0);
  ASSERT_EQ(run("run -q --seed 6 " + cfg.string(), "TNAV_OUT_DIR=" + c.string()), 0);
  ASSERT_TRUE(fs::exists(a / "trials.csv"));
  EXPECT_EQ(slurp(a / "trials.csv"), slurp(b / "trials.csv"));
  EXPECT_EQ(slurp(a / "traces/empty0_1.trace"), slurp(b / "traces/empty0_1.trace"));
  EXPECT_NE(slurp(a / "trials.csv"), slurp(c / "trials.csv"));
  EXPECT_NE(slurp(c / "summary.json").find("\"seed\": 6"), std::string::npos);

  // the trace replays without collision against its map
  EXPECT_EQ(run("replay " + (a / "traces/empty0_0.trace").string() + " -m " + (a / "maps/empty0.map").string()), 0);
  for (const auto& d : {a, b, c}) fs::remove_all(d);
}

TEST(Cli, MapGenWritesReadableMap) {
  const auto out = tmp("forest.map");
  ASSERT_EQ(run("map gen forest 9 " + out.string()), 0);
  const auto text = slurp(out);
  EXPECT_EQ(text.rfind("# tnav world map", 0), 0u);
  std::size_t n = 0;
  for (std::size_t pos = 0; (pos = text.find("\nobstacle ", pos)) != std::string::npos; ++pos) ++n;
  EXPECT_EQ(n, 20u);
  EXPECT_EQ(run("map gen forest 9 /nonexistent/dir/out.map"), 3);
  EXPECT_EQ(run("map gen forest 9 " + out.string() + " --area 4 --density 10"), 2);
  fs::remove(out);
}

TEST(SampleConfigs, AllParse) {
  std::size_t n = 0;
  for (const auto& e : fs::directory_iterator(TNAV_SAMPLE_CONFIG_DIR)) {
    if (e.path().extension() != ".json") continue;
    ++n;
    EXPECT_NO_THROW(tnav::bench::parse_config(e.path().string())) << e.path();
  }
  EXPECT_GE(n, 4u);
}
