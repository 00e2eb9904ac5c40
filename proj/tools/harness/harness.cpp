#include "harness.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <numbers>
#include <random>
#include <sstream>

#include "sl2hat/characters.hpp"
#include "sl2hat/diffusion.hpp"
#include "sl2hat/markov_chain.hpp"
#include "sl2hat/partitions.hpp"
#include "sl2hat/random.hpp"
#include "sl2hat/tensor_decomp.hpp"
#include "sl2hat/theta_harmonic.hpp"

namespace sl2hat::harness {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr const char* kVersion = "0.3.0";

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::string normalize_key(std::string key) {
  key = trim(key);
  while (!key.empty() && key.front() == '-') key.erase(key.begin());
  std::replace(key.begin(), key.end(), '_', '-');
  return key;
}

template <typename Int>
Int parse_int(const std::string& key, const std::string& text) {
  const std::string s = trim(text);
  Int v{};
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc{} || ptr != s.data() + s.size()) {
    throw ConfigError("bad integer for '" + key + "': '" + text + "'");
  }
  return v;
}

double parse_real(const std::string& key, const std::string& text) {
  const std::string s = trim(text);
  std::size_t used = 0;
  double v = 0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    throw ConfigError("bad number for '" + key + "': '" + text + "'");
  }
  if (used != s.size() || !std::isfinite(v)) throw ConfigError("bad number for '" + key + "': '" + text + "'");
  return v;
}

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream is(text);
  while (std::getline(is, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

double relative_gap(long double a, long double b, long double scale) {
  const long double s = std::max({std::fabs(a), std::fabs(b), scale});
  return s == 0 ? 0.0 : static_cast<double>(std::fabs(a - b) / s);
}

void add(VerifyReport& r, std::string suite, std::string item, double measured, double tol) {
  r.rows.push_back({std::move(suite), std::move(item), measured, tol, measured <= tol});
}

std::string fmt(double v) {
  std::ostringstream os;
  os << v;
  return os.str();
}

// Sum over weights of V(L0): sum_{k,s} p(s) exp(-y (k^2 + s)).
long double weight_sum_basic(long double y) {
  long double theta = 0;
  for (std::int64_t k = 0;; ++k) {
    const long double term = std::exp(-y * static_cast<long double>(k * k));
    theta += k == 0 ? term : 2 * term;
    if (term < 1e-22L) break;
  }
  long double partitions = 0;
  for (std::int64_t s = 0; s <= kPartitionRealMax; ++s) {
    const long double term = weight_mult_basic_real({1, 0, -s}) * std::exp(-y * static_cast<long double>(s));
    partitions += term;
    if (s > 20 && term < 1e-22L * partitions) break;
  }
  return theta * partitions;
}

void suite_poisson(const RunConfig& cfg, VerifyReport& r) {
  const double tol = 1e-10;
  double worst_phi = 0;
  double worst_phi0 = 0;
  for (double t : {0.5, 1.0, 2.0, 4.0}) {
    for (double a : {0.5, 1.0, 2.0}) {
      double scale = 0;
      for (int i = 1; i <= 9; ++i) scale = std::max(scale, std::fabs(phi(a, {0.1 * i * t, t}, cfg.eps).value));
      for (int i = 1; i <= 9; ++i) {
        const SpaceTimePoint p{0.1 * i * t, t};
        const double d = phi(a, p, cfg.eps, Regime::direct).value;
        const double q = phi(a, p, cfg.eps, Regime::poisson).value;
        worst_phi = std::max(worst_phi, relative_gap(d, q, 1e-3 * scale));
      }
    }
    for (int i = 1; i <= 9; ++i) {
      const SpaceTimePoint p{0.1 * i * t, t};
      const double d = phi0(p, cfg.eps, Regime::direct).value;
      const double q = phi0(p, cfg.eps, Regime::poisson).value;
      worst_phi0 = std::max(worst_phi0, relative_gap(d, q, 0));
    }
  }
  add(r, "poisson", "phi_a direct vs resummed", worst_phi, tol);
  add(r, "poisson", "phi_0 direct vs resummed", worst_phi0, tol);

  double worst_jacobi = 0;
  for (double t : {0.1, 1.0, 10.0}) {
    for (int i = 0; i < 20; ++i) {
      const auto [lhs, rhs] = jacobi_identity_sides(0.05L * i, t);
      worst_jacobi = std::max(worst_jacobi, relative_gap(lhs, rhs, 0));
    }
  }
  add(r, "poisson", "jacobi theta identity", worst_jacobi, 1e-12);
}

void suite_characters(const RunConfig& cfg, VerifyReport& r) {
  SeriesControl ctrl;
  ctrl.eps = cfg.eps;
  for (double y : {0.2, 0.5, 1.0, 2.0}) {
    const long double lhs = char_eval(kLambda0, CharPoint{0, y}, ctrl).real();
    const long double rhs = weight_sum_basic(y);
    add(r, "characters", "L0 vs weight sum, y=" + fmt(y), relative_gap(lhs, rhs, 0), 1e-8);
  }
  const auto [lhs, rhs] = char_limit_check(400, 1, 0.5, 1);
  add(r, "characters", "ratio limit n=400", std::fabs(lhs - rhs), 1e-2);
}

void suite_one_step(const RunConfig& cfg, VerifyReport& r) {
  SeriesControl ctrl;
  ctrl.eps = cfg.eps;
  std::mt19937_64 gen(0x5eed0003ULL);
  std::uniform_int_distribution<std::int64_t> level_dist(1, 6);
  double worst_identity = 0;
  double worst_row = 0;
  for (int i = 0; i < 20; ++i) {
    const std::int64_t n = level_dist(gen);
    const std::int64_t x = std::uniform_int_distribution<std::int64_t>(0, n)(gen);
    for (double y : {0.3, 0.8}) {
      const TiltVector tilt{0, 2 * y};
      const ProjectedRow row = projected_row(n, x, tilt, ctrl);
      worst_row = std::max(worst_row, std::fabs(row.raw_sum - 1));
      for (double a : {0.5, 1.0}) {
        long double lhs = 0;
        for (std::size_t j = 0; j < row.targets.size(); ++j) {
          lhs += row.probability[j] * char_ratio({n + 1, row.targets[j], 0}, a, y, ctrl).real();
        }
        const long double rhs =
            char_ratio({n, x, 0}, a, y, ctrl).real() * char_ratio(kLambda0, a, y, ctrl).real();
        worst_identity = std::max(worst_identity, relative_gap(lhs, rhs, 0));
      }
    }
  }
  add(r, "chain", "projected row sums", worst_row, 1e-6);
  add(r, "chain", "one-step character identity", worst_identity, 1e-6);
}

void suite_pde(VerifyReport& r) {
  const SpaceTimePoint p{0.5, 1};
  const double h = 1e-3;
  for (double a : {0.0, 1.0, kPi}) {
    const double r1 = harmonicity_residual(a, p, h);
    const double r2 = harmonicity_residual(a, p, 2 * h);
    const double r4 = harmonicity_residual(a, p, 4 * h);
    const double order = std::min(std::log2(r4 / r2), std::log2(r2 / r1));
    add(r, "pde", "residual a=" + fmt(a), r1, 1e-5);
    // order reported as a deficit below 1.9 so that the tolerance column reads uniformly
    add(r, "pde", "order deficit a=" + fmt(a), std::max(0.0, 1.9 - order), 0);
  }
}

void suite_boundary(const RunConfig& cfg, VerifyReport& r) {
  const double sign = cfg.fault_phi0_sign ? -1.0 : 1.0;
  double worst_zero = 0;
  for (double t : {0.3, 1.0, 3.0}) {
    for (double a : {0.5, 2.0}) {
      double scale = 0;
      for (int i = 1; i < 10; ++i) scale = std::max(scale, std::fabs(phi(a, {0.1 * i * t, t}, cfg.eps).value));
      worst_zero = std::max(worst_zero, std::fabs(phi(a, {0, t}, cfg.eps).value) / scale);
      worst_zero = std::max(worst_zero, std::fabs(phi(a, {t, t}, cfg.eps).value) / scale);
    }
    const double scale0 = phi0({0.5 * t, t}, cfg.eps).value;
    worst_zero = std::max(worst_zero, std::fabs(phi0({0, t}, cfg.eps).value) / scale0);
    worst_zero = std::max(worst_zero, std::fabs(phi0({t, t}, cfg.eps).value) / scale0);
  }
  add(r, "boundary", "zeros at x=0 and x=t", worst_zero, 1e-10);

  std::size_t non_positive = 0;
  for (double t : {0.5, 1.0, 4.0}) {
    for (int i = 1; i < 100; ++i) {
      if (!(sign * phi0({0.01 * i * t, t}, cfg.eps).value > 0)) ++non_positive;
    }
  }
  add(r, "boundary", "phi_0 positive inside", static_cast<double>(non_positive), 0);
}

void suite_oracle(VerifyReport& r) {
  std::size_t mismatches = 0;
  for (std::int64_t n = 1; n <= 3; ++n) {
    for (std::int64_t x = 0; x <= n; ++x) {
      for (std::int64_t d : {0, -1, -2}) {
        const Weight lambda{n, x, d};
        if (decompose(lambda, 6).entries != char_product_oracle(lambda, 6).entries) ++mismatches;
      }
    }
  }
  add(r, "oracle", "decompose vs formal product, level<=3 depth 6", static_cast<double>(mismatches), 0);
}

void write_verify(std::ostream& os, const VerifyReport& rep) {
  os << "suite,item,measured,tolerance,pass\n";
  for (const auto& row : rep.rows) {
    os << row.suite << ",\"" << row.item << "\"," << row.measured << ',' << row.tolerance << ','
       << (row.pass ? 1 : 0) << '\n';
  }
}

void write_converge(std::ostream& os, const ConvergenceReport& rep) {
  os << "n,m,statistic,target,std_error,abs_error\n";
  for (const auto& row : rep.rows) {
    os << row.n << ',' << row.m << ',' << row.statistic << ',' << row.target << ',' << row.std_error << ','
       << row.error() << '\n';
  }
}

void write_interval(std::ostream& os, const IntervalLimitReport& rep) {
  os << "c,sup_error,target_sup,relative\n";
  for (const auto& row : rep.rows) {
    os << row.c << ',' << row.sup_error << ',' << row.target_sup << ',' << row.relative << '\n';
  }
}

std::ofstream open_output(const RunConfig& cfg, const std::string& name) {
  std::filesystem::create_directories(cfg.out_dir);
  const auto path = cfg.out_dir / name;
  std::ofstream os(path);
  if (!os) throw ConfigError("cannot write " + path.string());
  write_manifest(os, cfg);
  return os;
}

}  // namespace

const std::vector<std::string>& known_commands() {
  static const std::vector<std::string> names{"verify", "sample-chain", "sample-diffusion", "converge",
                                              "interval-limit"};
  return names;
}

void validate(const RunConfig& cfg) {
  const auto& names = known_commands();
  if (std::find(names.begin(), names.end(), cfg.command) == names.end()) {
    throw ConfigError("unknown command '" + cfg.command + "'");
  }
  if (cfg.n_list.empty()) throw ConfigError("n list is empty");
  for (std::size_t i = 0; i < cfg.n_list.size(); ++i) {
    if (cfg.n_list[i] < 10) throw ConfigError("every n must be at least 10");
    if (i > 0 && cfg.n_list[i] <= cfg.n_list[i - 1]) throw ConfigError("n list must be strictly ascending");
  }
  if (!(cfg.t > 0)) throw ConfigError("t must be positive");
  if (!(cfg.u > 0)) throw ConfigError("u must be positive");
  if (!(cfg.x > 0 && cfg.x < cfg.u)) throw ConfigError("x must lie in (0, u)");
  if (!(cfg.c > 0 && cfg.c <= 1)) throw ConfigError("c must lie in (0, 1]");
  for (double c : cfg.c_list) {
    if (!(c > 0 && c < 1)) throw ConfigError("every entry of c-list must lie in (0, 1)");
  }
  if (cfg.paths < 1) throw ConfigError("paths must be at least 1");
  if (!(cfg.dt > 0 && cfg.dt <= cfg.t)) throw ConfigError("dt must lie in (0, t]");
  if (cfg.depth_cut < 0) throw ConfigError("depth-cut must be non-negative");
  if (!(cfg.eps > 0 && cfg.eps < 1)) throw ConfigError("eps must lie in (0, 1)");
}

std::map<std::string, std::string> read_config_file(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw ConfigError("cannot open config file " + path.string());
  std::map<std::string, std::string> out;
  std::string line;
  int line_no = 0;
  while (std::getline(is, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError(path.string() + ":" + std::to_string(line_no) + ": expected key = value");
    }
    out[normalize_key(line.substr(0, eq))] = trim(line.substr(eq + 1));
  }
  return out;
}

void apply_setting(RunConfig& cfg, const std::string& raw_key, const std::string& value) {
  const std::string key = normalize_key(raw_key);
  if (key == "command") {
    cfg.command = trim(value);
  } else if (key == "n") {
    cfg.n_list.clear();
    for (const auto& item : split_list(value)) cfg.n_list.push_back(parse_int<std::int64_t>(key, item));
  } else if (key == "t") {
    cfg.t = parse_real(key, value);
  } else if (key == "x") {
    cfg.x = parse_real(key, value);
  } else if (key == "u") {
    cfg.u = parse_real(key, value);
  } else if (key == "c") {
    cfg.c = parse_real(key, value);
  } else if (key == "c-list") {
    cfg.c_list.clear();
    for (const auto& item : split_list(value)) cfg.c_list.push_back(parse_real(key, item));
  } else if (key == "paths") {
    cfg.paths = parse_int<std::size_t>(key, value);
  } else if (key == "dt") {
    cfg.dt = parse_real(key, value);
  } else if (key == "depth-cut") {
    cfg.depth_cut = parse_int<std::int64_t>(key, value);
  } else if (key == "eps") {
    cfg.eps = parse_real(key, value);
  } else if (key == "seed") {
    cfg.seed = parse_int<std::uint64_t>(key, value);
  } else if (key == "out") {
    cfg.out_dir = trim(value);
  } else if (key == "dump-paths") {
    cfg.dump_paths = parse_int<std::size_t>(key, value);
  } else if (key == "workers") {
    cfg.workers = parse_int<unsigned>(key, value);
  } else {
    throw ConfigError("unknown setting '" + raw_key + "'");
  }
}

std::filesystem::path default_out_dir() {
  const char* env = std::getenv(kOutDirEnv);
  return env && *env ? std::filesystem::path(env) : std::filesystem::path(".");
}

std::string canonical_text(const RunConfig& cfg) {
  std::ostringstream os;
  os << std::setprecision(17) << "command=" << cfg.command << ";n=";
  for (std::size_t i = 0; i < cfg.n_list.size(); ++i) os << (i ? "," : "") << cfg.n_list[i];
  os << ";t=" << cfg.t << ";x=" << cfg.x << ";u=" << cfg.u << ";c=" << cfg.c << ";c-list=";
  for (std::size_t i = 0; i < cfg.c_list.size(); ++i) os << (i ? "," : "") << cfg.c_list[i];
  os << ";paths=" << cfg.paths << ";dt=" << cfg.dt << ";depth-cut=" << cfg.depth_cut << ";eps=" << cfg.eps
     << ";seed=" << cfg.seed << ";dump-paths=" << cfg.dump_paths << ";fault=" << cfg.fault_phi0_sign;
  return os.str();
}

std::uint64_t config_hash(const RunConfig& cfg) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : canonical_text(cfg)) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  return h;
}

void write_manifest(std::ostream& os, const RunConfig& cfg) {
  std::ostringstream hash;
  hash << std::hex << std::setw(16) << std::setfill('0') << config_hash(cfg);
  os << kSchema << '\n'
     << "# tool=sl2hat version=" << kVersion << " command=" << cfg.command << " seed=" << cfg.seed
     << " config_hash=" << hash.str() << '\n'
     << "# config " << canonical_text(cfg) << '\n'
     << std::setprecision(17);
}

bool VerifyReport::all_pass() const {
  return std::all_of(rows.begin(), rows.end(), [](const VerifyRow& r) { return r.pass; });
}

VerifyReport run_verify(const RunConfig& cfg) {
  VerifyReport rep;
  suite_poisson(cfg, rep);
  suite_characters(cfg, rep);
  suite_one_step(cfg, rep);
  suite_pde(rep);
  suite_boundary(cfg, rep);
  suite_oracle(rep);
  return rep;
}

double ConvergenceRow::error() const { return std::fabs(statistic - target); }

ConvergenceReport run_converge(const RunConfig& cfg) {
  validate(cfg);
  ConvergenceReport rep;
  const double horizon = cfg.t + cfg.u;
  for (std::int64_t n : cfg.n_list) {
    const auto z = scaled_chain_marginal(n, cfg.t, cfg.x, cfg.u, cfg.paths,
                                         derive_seed(cfg.seed, static_cast<std::uint64_t>(n)), cfg.workers);
    for (int m = 1; m <= kTestFunctions; ++m) {
      const double a = m * kPi / horizon;
      std::vector<double> f(z.size());
      for (std::size_t i = 0; i < z.size(); ++i) f[i] = phi_ratio(a, {std::clamp(z[i], 0.0, horizon), horizon});
      const MeanEstimate est = mean_and_error(f);
      rep.rows.push_back({n, m, est.mean, moment_identity_target(a, cfg.x, cfg.u, cfg.t).value, est.std_error});
    }
  }
  const std::size_t k = kTestFunctions;
  rep.monotone = true;
  for (std::size_t i = k; i < rep.rows.size(); ++i) {
    const auto& prev = rep.rows[i - k];
    const auto& cur = rep.rows[i];
    const double noise = 3 * std::hypot(prev.std_error, cur.std_error);
    if (cur.error() > prev.error() + noise) rep.monotone = false;
  }
  rep.final_within = true;
  for (std::size_t i = rep.rows.size() - k; i < rep.rows.size(); ++i) {
    const auto& row = rep.rows[i];
    if (row.error() > 3 * row.std_error + 0.05 * std::fabs(row.target)) rep.final_within = false;
  }
  return rep;
}

IntervalLimitReport run_interval_limit(const RunConfig& cfg) {
  validate(cfg);
  IntervalLimitReport rep;
  for (double c : cfg.c_list) {
    const auto e = interval_limit_error(c, cfg.x, cfg.u, cfg.t, kIntervalGrid);
    rep.rows.push_back({c, e.sup_error, e.target_sup, e.relative});
  }
  rep.monotone = true;
  for (std::size_t i = 1; i < rep.rows.size(); ++i) {
    if (!(rep.rows[i].relative < rep.rows[i - 1].relative)) rep.monotone = false;
  }
  rep.final_within = !rep.rows.empty() && rep.rows.back().relative <= 1e-3;
  return rep;
}

SampleChainReport run_sample_chain(const RunConfig& cfg) {
  validate(cfg);
  const std::int64_t n = cfg.n_list.front();
  const auto nd = static_cast<double>(n);
  const Weight start{static_cast<std::int64_t>(std::floor(nd * cfg.u)),
                     static_cast<std::int64_t>(std::floor(nd * cfg.x)), 0};
  const auto steps = static_cast<std::int64_t>(std::floor(nd * cfg.t));
  SeriesControl ctrl;
  ctrl.eps = cfg.eps;
  std::vector<ChainPath> paths(cfg.paths);
  parallel_for_paths(
      cfg.paths,
      [&](std::size_t i) {
        paths[i] = sample_projected_chain(start, TiltVector::theorem(n), steps, derive_seed(cfg.seed, i), ctrl);
      },
      cfg.workers);
  SampleChainReport rep{cfg.paths, steps, 0};
  for (const auto& p : paths) rep.max_row_error = std::max(rep.max_row_error, p.defect_max);

  auto os = open_output(cfg, "sample-chain.csv");
  os << "# n=" << n << " steps=" << steps << " max_row_error=" << rep.max_row_error << '\n';
  write_paths_csv(os, paths);
  return rep;
}

SampleDiffusionReport run_sample_diffusion(const RunConfig& cfg) {
  validate(cfg);
  const DomainSpec spec{cfg.u, cfg.c};
  const std::uint64_t seed_h = derive_seed(cfg.seed, 1);
  const std::uint64_t seed_k = derive_seed(cfg.seed, 2);
  const auto h = simulate_ensemble(Estimator::h_transform, cfg.x, spec, cfg.t, cfg.dt, cfg.paths, seed_h, 0,
                                   cfg.workers);
  const auto k = simulate_ensemble(Estimator::killed_reweighted, cfg.x, spec, cfg.t, cfg.dt, cfg.paths, seed_k, 0,
                                   cfg.workers);
  SampleDiffusionReport rep;
  rep.flagged = h.flagged;
  rep.absorbed = k.absorbed;

  std::vector<MomentRow> rows;
  const MeanEstimate w = mean_and_error(k.weights);
  rows.push_back({"killed_weight", 0, cfg.t, w.mean, w.std_error, 1.0,
                  w.std_error > 0 ? (w.mean - 1) / w.std_error : 0.0});
  rep.weight_ok = std::fabs(w.mean - 1) <= 3 * w.std_error &&
                  static_cast<double>(h.flagged) <= kMaxFlaggedFraction * static_cast<double>(cfg.paths);

  rep.moments_ok = true;
  if (cfg.c == 1) {
    const double horizon = cfg.t + cfg.u;
    for (int m = 0; m < kTestFunctions; ++m) {
      const double a = m * kPi / horizon;
      const double target = moment_identity_target(a, cfg.x, cfg.u, cfg.t).value;
      std::vector<double> fh(cfg.paths);
      std::vector<double> fk(cfg.paths);
      for (std::size_t i = 0; i < cfg.paths; ++i) {
        fh[i] = phi_ratio(a, {h.values[i], horizon});
        fk[i] = k.weights[i] > 0 ? k.weights[i] * phi_ratio(a, {k.values[i], horizon}) : 0.0;
      }
      for (const auto& [name, f] : {std::pair{"h_transform", &fh}, std::pair{"killed_reweighted", &fk}}) {
        const MeanEstimate e = mean_and_error(*f);
        const double z = e.std_error > 0 ? (e.mean - target) / e.std_error : 0.0;
        rows.push_back({name, a, cfg.t, e.mean, e.std_error, target, z});
        if (std::fabs(e.mean - target) > 3 * e.std_error + 0.02 * std::fabs(target)) rep.moments_ok = false;
      }
    }
  }

  auto os = open_output(cfg, "sample-diffusion.csv");
  os << "# flagged=" << h.flagged << " absorbed=" << k.absorbed << '\n';
  write_moment_csv(os, rows);

  if (cfg.dump_paths > 0) {
    const std::size_t count = std::min(cfg.dump_paths, cfg.paths);
    std::vector<PathSample> dump;
    dump.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
      dump.push_back(simulate_conditioned_path(cfg.x, spec, cfg.t, cfg.dt, derive_seed(seed_h, i)));
    }
    auto ps = open_output(cfg, "sample-diffusion-paths.csv");
    write_path_csv(ps, dump);
  }
  return rep;
}

ExitStatus run(const RunConfig& cfg, std::ostream& log) {
  validate(cfg);
  log << std::setprecision(6);
  if (cfg.command == "verify") {
    const auto rep = run_verify(cfg);
    auto os = open_output(cfg, "verify.csv");
    write_verify(os, rep);
    for (const auto& row : rep.rows) {
      log << (row.pass ? "PASS " : "FAIL ") << row.suite << ": " << row.item << " (" << row.measured
          << " <= " << row.tolerance << ")\n";
    }
    return rep.all_pass() ? ExitStatus::pass : ExitStatus::statistical_failure;
  }
  if (cfg.command == "converge") {
    const auto rep = run_converge(cfg);
    auto os = open_output(cfg, "converge.csv");
    write_converge(os, rep);
    for (const auto& row : rep.rows) {
      log << "n=" << row.n << " m=" << row.m << " S=" << row.statistic << " T=" << row.target
          << " SE=" << row.std_error << '\n';
    }
    log << "monotone=" << rep.monotone << " final_within=" << rep.final_within << '\n';
    return rep.pass() ? ExitStatus::pass : ExitStatus::statistical_failure;
  }
  if (cfg.command == "interval-limit") {
    const auto rep = run_interval_limit(cfg);
    auto os = open_output(cfg, "interval-limit.csv");
    write_interval(os, rep);
    for (const auto& row : rep.rows) log << "c=" << row.c << " relative=" << row.relative << '\n';
    log << "monotone=" << rep.monotone << " final_within=" << rep.final_within << '\n';
    return rep.pass() ? ExitStatus::pass : ExitStatus::statistical_failure;
  }
  if (cfg.command == "sample-chain") {
    const auto rep = run_sample_chain(cfg);
    log << rep.paths << " paths of " << rep.steps << " steps, max row error " << rep.max_row_error << '\n';
    return rep.max_row_error <= kMaxRowDefect ? ExitStatus::pass : ExitStatus::statistical_failure;
  }
  const auto rep = run_sample_diffusion(cfg);
  log << "flagged=" << rep.flagged << " absorbed=" << rep.absorbed << " weight_ok=" << rep.weight_ok
      << " moments_ok=" << rep.moments_ok << '\n';
  return rep.pass() ? ExitStatus::pass : ExitStatus::statistical_failure;
}

}  // namespace sl2hat::harness
