#include <sys/wait.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct CliResult {
  int code = -1;
  std::string out;
};

CliResult run(const std::string& args) {
  const std::string cmd = std::string(TRIMON_CLI) + " " + args + " 2>/dev/null";
  CliResult r;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return r;
  char buf[4096];
  std::size_t n = 0;
  while ((n = fread(buf, 1, sizeof buf, pipe)) > 0) r.out.append(buf, n);
  const int status = pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string cfg(const char* name) { return std::string("--config ") + TRIMON_CONFIG_DIR + "/" + name; }

fs::path scratch(const char* name) {
  const fs::path p = fs::temp_directory_path() / name;
  fs::remove_all(p);
  return p;
}

}  // namespace

TEST(Cli, DeriveReportsTableS1Coupling) {
  const CliResult r = run("derive " + cfg("canonical.json"));
  ASSERT_EQ(r.code, 0);
  const json j = json::parse(r.out);
  EXPECT_NEAR(j["j_over_pi_mhz"]["ab"].get<double>(), 227.0, 0.5);
  EXPECT_NEAR(j["j_over_pi_mhz"]["bc"].get<double>(), 253.6, 0.5);
  EXPECT_NEAR(j["j_over_pi_mhz"]["ca"].get<double>(), 248.0, 0.5);
}

TEST(Cli, DeriveCsv) {
  const CliResult r = run("derive " + cfg("canonical.json") + " --format csv");
  ASSERT_EQ(r.code, 0);
  EXPECT_EQ(r.out.rfind("quantity,value", 0), 0u);
}

TEST(Cli, EmptyCircuitIsIdentity) {
  const CliResult r = run("simulate --circuit empty");
  ASSERT_EQ(r.code, 0);
  EXPECT_DOUBLE_EQ(json::parse(r.out)["gate_fidelity"].get<double>(), 1.0);
}

TEST(Cli, AnalyticTomography) {
  const CliResult r = run("tomo " + cfg("canonical.json") + " --shots 0");
  ASSERT_EQ(r.code, 0);
  EXPECT_GE(json::parse(r.out)["fidelity"].get<double>(), 0.999);
}

TEST(Cli, TomographyIsReproducible) {
  const std::string args = "tomo " + cfg("canonical.json") + " --shots 500 --bootstrap 0 --seed 5";
  const CliResult a = run(args);
  const CliResult b = run(args);
  ASSERT_EQ(a.code, 0);
  EXPECT_EQ(a.out, b.out);
}

TEST(Cli, TomographyNeedsSeed) {
  const fs::path dir = scratch("trimon_cli_noseed");
  fs::create_directories(dir);
  std::ofstream(dir / "run.json") << R"({"tomography": {"shots": 100}})";
  EXPECT_EQ(run("tomo --config " + (dir / "run.json").string()).code, 2);
  EXPECT_EQ(run("tomo --config " + (dir / "run.json").string() + " --seed 1 --bootstrap 0").code, 0);
}

TEST(Cli, FitCrossing) {
  const CliResult r = run("fit-crossing " + cfg("canonical.json"));
  ASSERT_EQ(r.code, 0);
  EXPECT_NEAR(json::parse(r.out)["j_over_pi_mhz"].get<double>(), 77.6, 77.6 * 0.02);
}

TEST(Cli, OutputDirectoryAndReport) {
  const fs::path dir = scratch("trimon_cli_out");
  const std::string out = " --out " + dir.string();
  ASSERT_EQ(run("derive " + cfg("canonical.json") + out).code, 0);
  ASSERT_EQ(run("spectrum " + cfg("canonical.json") + out).code, 0);
  ASSERT_EQ(run("fit-crossing " + cfg("canonical.json") + out).code, 0);
  ASSERT_EQ(run("report" + out).code, 0);
  std::ifstream in(dir / "report.json");
  const json report = json::parse(in);
  EXPECT_TRUE(report.contains("coupling_comparison"));
  EXPECT_TRUE(fs::exists(dir / "spectrum.json"));
}

TEST(Cli, ExitCodes) {
  EXPECT_EQ(run("").code, 1);
  EXPECT_EQ(run("frobnicate").code, 1);
  EXPECT_EQ(run("derive --no-such-flag").code, 1);
  EXPECT_EQ(run("derive").code, 2);
  EXPECT_EQ(run("derive --config /nonexistent.json").code, 2);
  EXPECT_EQ(run("simulate --dt-ps 5000 --circuit cnot_ba").code, 3);
}
