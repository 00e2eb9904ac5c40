#pragma once

// Experiment drivers behind the sl2hat command-line tool. Every driver writes
// CSV files that start with a manifest block:
//
//   schema=1
//   # tool=sl2hat version=0.3.0 command=<name> seed=<seed> config_hash=<fnv1a>
//   <column header>
//   <rows, 17 significant digits>

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

namespace sl2hat::harness {

inline constexpr const char* kSchema = "schema=1";
inline constexpr const char* kOutDirEnv = "SL2HAT_OUT_DIR";

enum class ExitStatus : int { pass = 0, statistical_failure = 1, config_error = 2 };

/// Raised for anything the user can fix in the configuration.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  std::string command = "verify";
  std::vector<std::int64_t> n_list{25, 50, 100, 200};
  double t = 1;
  double x = 0.5;
  double u = 1;
  double c = 1;
  std::vector<double> c_list{0.1, 0.05, 0.01};
  std::size_t paths = 100'000;
  double dt = 1e-3;
  std::int64_t depth_cut = 12;
  double eps = 1e-12;
  std::uint64_t seed = 20240611;
  std::filesystem::path out_dir = ".";
  std::size_t dump_paths = 0;  // number of full trajectories to write, 0 = none
  unsigned workers = 0;        // 0 = default_workers()
  bool fault_phi0_sign = false;  // negative control for verify
};

/// Commands accepted by --command.
const std::vector<std::string>& known_commands();

/// Throws ConfigError when an invariant of RunConfig is violated.
void validate(const RunConfig& cfg);

/// Reads `key = value` lines ('#' starts a comment) into a map. Throws ConfigError.
std::map<std::string, std::string> read_config_file(const std::filesystem::path& path);

/// Applies one key/value pair using the long flag names (n, t, x, ..., out).
void apply_setting(RunConfig& cfg, const std::string& key, const std::string& value);

/// out_dir from the environment when set, else ".".
std::filesystem::path default_out_dir();

/// FNV-1a over the canonical text of every field except out_dir.
std::uint64_t config_hash(const RunConfig& cfg);
std::string canonical_text(const RunConfig& cfg);

void write_manifest(std::ostream& os, const RunConfig& cfg);

struct VerifyRow {
  std::string suite;
  std::string item;
  double measured = 0;
  double tolerance = 0;
  bool pass = false;
};

struct VerifyReport {
  std::vector<VerifyRow> rows;
  bool all_pass() const;
};

/// Deterministic identity suites.
VerifyReport run_verify(const RunConfig& cfg);

struct ConvergenceRow {
  std::int64_t n = 0;
  int m = 0;
  double statistic = 0;
  double target = 0;
  double std_error = 0;
  double error() const;
};

struct ConvergenceReport {
  std::vector<ConvergenceRow> rows;
  bool monotone = false;        // errors non-increasing in n up to MC noise
  bool final_within = false;    // largest n within 3 SE + 5% of |target|
  bool pass() const { return monotone && final_within; }
};

inline constexpr int kTestFunctions = 3;

/// S_{n,m} over scaled chain readouts for every n in cfg.n_list.
ConvergenceReport run_converge(const RunConfig& cfg);

struct IntervalLimitRow {
  double c = 0;
  double sup_error = 0;
  double target_sup = 0;
  double relative = 0;
};

struct IntervalLimitReport {
  std::vector<IntervalLimitRow> rows;
  bool monotone = false;
  bool final_within = false;  // last relative error <= 1e-3
  bool pass() const { return monotone && final_within; }
};

inline constexpr int kIntervalGrid = 199;

IntervalLimitReport run_interval_limit(const RunConfig& cfg);

struct SampleChainReport {
  std::size_t paths = 0;
  std::int64_t steps = 0;
  double max_row_error = 0;
};

/// Projected chains from ([nu], [xn]) with tilt (2/n) L0 for the first n in n_list.
SampleChainReport run_sample_chain(const RunConfig& cfg);

struct SampleDiffusionReport {
  std::size_t flagged = 0;
  std::size_t absorbed = 0;
  bool moments_ok = false;
  bool weight_ok = false;
  bool pass() const { return moments_ok && weight_ok; }
};

SampleDiffusionReport run_sample_diffusion(const RunConfig& cfg);

/// Dispatches on cfg.command, writes <out_dir>/<command>.csv and returns the exit status.
ExitStatus run(const RunConfig& cfg, std::ostream& log);

}  // namespace sl2hat::harness
