#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

#include <sys/wait.h>
#include <unistd.h>

#include <gtest/gtest.h>

namespace fs = std::filesystem;

namespace {

struct Outcome {
  int code = -1;
  std::string out;
};

Outcome run(const std::string& args, const std::string& env = "") {
  const std::string cmd = env + " " + TUCB_CLI_PATH + " " + args + " 2>&1";
  Outcome o;
  FILE* pipe = ::popen(cmd.c_str(), "r");
  if (!pipe) return o;
  char buf[4096];
  std::size_t got;
  while ((got = std::fread(buf, 1, sizeof buf, pipe)) > 0) o.out.append(buf, got);
  const int status = ::pclose(pipe);
  o.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return o;
}

fs::path scratch(const std::string& name) {
  const auto p = fs::temp_directory_path() / ("tucb_cli_" + name + "_" + std::to_string(::getpid()));
  fs::remove_all(p);
  return p;
}

}  // namespace

TEST(Cli, Models) {
  const auto o = run("models");
  EXPECT_EQ(o.code, 0);
  EXPECT_NE(o.out.find("0.9,0.75,0.45"), std::string::npos);
  EXPECT_NE(o.out.find("rho,0.2"), std::string::npos);
}

TEST(Cli, ComplexityTable) {
  const auto o = run("complexity");
  EXPECT_EQ(o.code, 0);
  EXPECT_EQ(o.out.rfind("theta,ucb,ucb_plus,mucb\n", 0), 0u);
  EXPECT_NE(o.out.find("theta_5,"), std::string::npos);
  EXPECT_NE(o.out.find("avg,"), std::string::npos);
}

TEST(Cli, SimulateWritesOutputs) {
  const auto dir = scratch("sim");
  const auto o = run("simulate -J 10 -n 200 --replications 2 --output-dir " + dir.string());
  EXPECT_EQ(o.code, 0) << o.out;
  EXPECT_NE(o.out.find("mUCB: mean per-episode regret"), std::string::npos);
  EXPECT_EQ(o.out.find("tUCB"), std::string::npos);
  for (const char* f : {"regret.csv", "complexity.csv", "models_estimated.csv", "diagnostics.json"})
    EXPECT_TRUE(fs::exists(dir / f)) << f;
  fs::remove_all(dir);
}

TEST(Cli, TransferHonoursConfigFileAndFlags) {
  const auto dir = scratch("transfer");
  fs::create_directories(dir);
  std::ofstream(dir / "run.cfg") << "J = 500\nn = 150\nreplications = 1\ncheckpoint_every = 5\n";
  const auto o = run("transfer --config " + (dir / "run.cfg").string() + " -J 10 --seed 3 --output-dir " +
                     (dir / "out").string());
  EXPECT_EQ(o.code, 0) << o.out;
  EXPECT_NE(o.out.find("tUCB: mean per-episode regret"), std::string::npos);
  std::ifstream in(dir / "out" / "regret.csv");
  std::string line;
  std::size_t rows = 0;
  while (std::getline(in, line)) ++rows;
  EXPECT_EQ(rows, 11u);
  fs::remove_all(dir);
}

TEST(Cli, OutputDirectoryFromEnvironment) {
  const auto dir = scratch("env");
  const auto o = run("simulate -J 5 -n 100 --replications 1 --policies UCB", "TUCB_OUTPUT_DIR=" + dir.string());
  EXPECT_EQ(o.code, 0) << o.out;
  EXPECT_TRUE(fs::exists(dir / "regret.csv"));
  fs::remove_all(dir);
}

TEST(Cli, Audit) {
  const auto o = run("audit");
  EXPECT_EQ(o.code, 0) << o.out;
  EXPECT_NE(o.out.find("PASS exact_moment_pipeline"), std::string::npos);
  EXPECT_EQ(o.out.find("FAIL"), std::string::npos);
}

TEST(Cli, SpectralCheck) {
  auto o = run("spectral-check");
  EXPECT_EQ(o.code, 0) << o.out;
  EXPECT_NE(o.out.find("matched max error"), std::string::npos);
  EXPECT_NE(o.out.find("sigma_min"), std::string::npos);
  o = run("spectral-check --episodes 2000");
  EXPECT_EQ(o.code, 0) << o.out;
  EXPECT_NE(o.out.find("moment_error"), std::string::npos);
}

TEST(Cli, ConfigErrorsExitWithOne) {
  EXPECT_EQ(run("simulate --bogus 1").code, 1);
  EXPECT_EQ(run("simulate --delta 2").code, 1);
  EXPECT_EQ(run("simulate --policies Thompson").code, 1);
  EXPECT_EQ(run("models --model-source /nonexistent/file.csv").code, 1);
  EXPECT_EQ(run("").code, 1);
  const auto dir = scratch("badcfg");
  fs::create_directories(dir);
  std::ofstream(dir / "bad.cfg") << "J = 5\nfoo = 1\n";
  const auto o = run("simulate --config " + (dir / "bad.cfg").string());
  EXPECT_EQ(o.code, 1);
  EXPECT_NE(o.out.find("line 2"), std::string::npos);
  EXPECT_EQ(run("transfer -n 10 --output-dir " + (dir / "o").string()).code, 1);
  fs::remove_all(dir);
}

TEST(Cli, UnwritableOutputExitsWithThree) {
  const auto dir = scratch("io");
  fs::create_directories(dir);
  std::ofstream(dir / "file") << "x";
  const auto o = run("simulate -J 2 -n 50 --replications 1 --policies UCB --output-dir " +
                     (dir / "file" / "sub").string());
  EXPECT_EQ(o.code, 3) << o.out;
  fs::remove_all(dir);
}

TEST(Cli, HelpExitsCleanly) { EXPECT_EQ(run("--help").code, 0); }
