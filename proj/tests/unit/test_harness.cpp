#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <string>

#include "harness/harness.hpp"

namespace fs = std::filesystem;
using namespace sl2hat::harness;

namespace {

fs::path scratch_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("sl2hat-test-" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream is(p);
  std::stringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

int cli(const std::string& args) {
  const std::string cmd = std::string(SL2HAT_CLI_PATH) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

RunConfig small_config(const fs::path& out) {
  RunConfig cfg;
  cfg.out_dir = out;
  cfg.workers = 1;
  return cfg;
}

}  // namespace

TEST(Config, FileThenOverride) {
  const auto dir = scratch_dir("config");
  const auto file = dir / "run.cfg";
  std::ofstream(file) << "# comment\ncommand = converge\nn = 20, 40\npaths=500  # inline\ndt = 0.01\n\nseed = 7\n";
  RunConfig cfg;
  for (const auto& [k, v] : read_config_file(file)) apply_setting(cfg, k, v);
  EXPECT_EQ(cfg.command, "converge");
  EXPECT_EQ(cfg.n_list, (std::vector<std::int64_t>{20, 40}));
  EXPECT_EQ(cfg.paths, 500u);
  EXPECT_EQ(cfg.seed, 7u);
  apply_setting(cfg, "paths", "800");
  EXPECT_EQ(cfg.paths, 800u);
  EXPECT_NO_THROW(validate(cfg));
}

TEST(Config, RejectsBadInput) {
  RunConfig cfg;
  EXPECT_THROW(apply_setting(cfg, "colour", "red"), ConfigError);
  EXPECT_THROW(apply_setting(cfg, "t", "soon"), ConfigError);
  EXPECT_THROW(apply_setting(cfg, "paths", "-3"), ConfigError);
  EXPECT_THROW(apply_setting(cfg, "dt", "1e-3x"), ConfigError);
  EXPECT_THROW(read_config_file("/nonexistent/sl2hat.cfg"), ConfigError);

  const auto dir = scratch_dir("badcfg");
  std::ofstream(dir / "bad.cfg") << "paths 100\n";
  EXPECT_THROW(read_config_file(dir / "bad.cfg"), ConfigError);
}

TEST(Config, ValidateInvariants) {
  const auto broken = [](auto edit) {
    RunConfig cfg;
    edit(cfg);
    return cfg;
  };
  EXPECT_NO_THROW(validate(RunConfig{}));
  EXPECT_THROW(validate(broken([](RunConfig& c) { c.command = "dance"; })), ConfigError);
  EXPECT_THROW(validate(broken([](RunConfig& c) { c.n_list = {50, 25}; })), ConfigError);
  EXPECT_THROW(validate(broken([](RunConfig& c) { c.n_list = {}; })), ConfigError);
  EXPECT_THROW(validate(broken([](RunConfig& c) { c.x = 1.0; })), ConfigError);
  EXPECT_THROW(validate(broken([](RunConfig& c) { c.c = 1.5; })), ConfigError);
  EXPECT_THROW(validate(broken([](RunConfig& c) { c.c_list = {0.5, 1.0}; })), ConfigError);
  EXPECT_THROW(validate(broken([](RunConfig& c) { c.dt = 2; })), ConfigError);
  EXPECT_THROW(validate(broken([](RunConfig& c) { c.paths = 0; })), ConfigError);
  EXPECT_THROW(validate(broken([](RunConfig& c) { c.eps = 0; })), ConfigError);
}

TEST(Config, HashIgnoresOutputDirectory) {
  RunConfig a;
  RunConfig b;
  b.out_dir = "/somewhere/else";
  EXPECT_EQ(config_hash(a), config_hash(b));
  b.seed += 1;
  EXPECT_NE(config_hash(a), config_hash(b));
  EXPECT_EQ(canonical_text(a), canonical_text(RunConfig{}));
}

TEST(Verify, PassesAndIsDeterministic) {
  const RunConfig cfg;
  const auto first = run_verify(cfg);
  EXPECT_TRUE(first.all_pass());
  for (const auto& row : first.rows) EXPECT_TRUE(row.pass) << row.suite << ": " << row.item;
  const auto second = run_verify(cfg);
  ASSERT_EQ(first.rows.size(), second.rows.size());
  for (std::size_t i = 0; i < first.rows.size(); ++i) EXPECT_EQ(first.rows[i].measured, second.rows[i].measured);
}

TEST(Verify, SignFaultIsCaught) {
  RunConfig cfg;
  cfg.fault_phi0_sign = true;
  EXPECT_FALSE(run_verify(cfg).all_pass());
}

TEST(Run, WritesManifest) {
  const auto dir = scratch_dir("manifest");
  auto cfg = small_config(dir);
  cfg.command = "interval-limit";
  std::ostringstream log;
  run(cfg, log);
  const std::string text = slurp(dir / "interval-limit.csv");
  std::istringstream lines(text);
  std::string line;
  std::getline(lines, line);
  EXPECT_EQ(line, kSchema);
  std::getline(lines, line);
  EXPECT_NE(line.find("command=interval-limit"), std::string::npos);
  std::ostringstream hex;
  hex << std::hex << std::setw(16) << std::setfill('0') << config_hash(cfg);
  EXPECT_NE(line.find("config_hash=" + hex.str()), std::string::npos);

  // deterministic output, byte for byte
  const auto again = scratch_dir("manifest2");
  cfg.out_dir = again;
  run(cfg, log);
  EXPECT_EQ(slurp(again / "interval-limit.csv"), text);
}

TEST(Converge, ReproducibleAcrossWorkers) {
  auto cfg = small_config(scratch_dir("converge"));
  cfg.command = "converge";
  cfg.n_list = {20, 40};
  cfg.paths = 400;
  const auto a = run_converge(cfg);
  cfg.workers = 3;
  const auto b = run_converge(cfg);
  ASSERT_EQ(a.rows.size(), 2u * kTestFunctions);
  ASSERT_EQ(a.rows.size(), b.rows.size());
  for (std::size_t i = 0; i < a.rows.size(); ++i) {
    EXPECT_EQ(a.rows[i].statistic, b.rows[i].statistic);
    EXPECT_EQ(a.rows[i].target, b.rows[i].target);
  }
  // the limit target does not depend on n
  for (int m = 0; m < kTestFunctions; ++m) EXPECT_EQ(a.rows[m].target, a.rows[m + kTestFunctions].target);
}

TEST(SampleDiffusion, Reproducible) {
  const auto dir = scratch_dir("diffusion");
  auto cfg = small_config(dir);
  cfg.command = "sample-diffusion";
  cfg.paths = 300;
  cfg.dt = 0.01;
  cfg.dump_paths = 2;
  std::ostringstream log;
  run(cfg, log);
  const std::string first = slurp(dir / "sample-diffusion.csv");
  EXPECT_TRUE(fs::exists(dir / "sample-diffusion-paths.csv"));
  run(cfg, log);
  EXPECT_EQ(slurp(dir / "sample-diffusion.csv"), first);
  EXPECT_NE(first.find("killed_weight"), std::string::npos);
}

TEST(SampleChain, WritesRows) {
  const auto dir = scratch_dir("chain");
  auto cfg = small_config(dir);
  cfg.command = "sample-chain";
  cfg.n_list = {10};
  cfg.paths = 5;
  std::ostringstream log;
  EXPECT_EQ(run(cfg, log), ExitStatus::pass);
  const std::string text = slurp(dir / "sample-chain.csv");
  EXPECT_EQ(text.rfind(kSchema, 0), 0u);
}

TEST(Cli, ExitCodes) {
  const auto dir = scratch_dir("cli");
  const std::string out = " --out " + dir.string();
  EXPECT_EQ(cli("--command verify" + out), 0);
  EXPECT_EQ(cli("--command verify --inject-phi0-sign-fault" + out), 1);
  EXPECT_EQ(cli("--command dance" + out), 2);
  EXPECT_EQ(cli("--command verify --x 3" + out), 2);
  EXPECT_EQ(cli("--command verify --bogus-flag" + out), 2);
  EXPECT_EQ(cli("--config /nonexistent.cfg" + out), 2);
  EXPECT_EQ(cli("--version"), 0);
  EXPECT_TRUE(fs::exists(dir / "verify.csv"));
}

TEST(Cli, EnvironmentSetsOutputDirectory) {
  const auto dir = scratch_dir("env");
  const std::string cmd = std::string(kOutDirEnv) + "=" + dir.string() + " " + SL2HAT_CLI_PATH +
                          " --command interval-limit >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  EXPECT_TRUE(WIFEXITED(status));
  EXPECT_TRUE(fs::exists(dir / "interval-limit.csv"));
}
