// Acceptance gate: one PASS/FAIL line per criterion.
//   sl2hat_acceptance                 all criteria
//   sl2hat_acceptance --criterion 5   a single one

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <limits>
#include <numbers>
#include <numeric>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "harness/harness.hpp"
#include "sl2hat/characters.hpp"
#include "sl2hat/diffusion.hpp"
#include "sl2hat/markov_chain.hpp"
#include "sl2hat/tensor_decomp.hpp"
#include "sl2hat/theta_harmonic.hpp"

using namespace sl2hat;

namespace {

constexpr double kPi = std::numbers::pi;

struct Outcome {
  bool pass = false;
  std::string detail;
};

struct Criterion {
  int id;
  std::string name;
  double budget_seconds;
  std::function<Outcome()> body;
};

std::string fmt(double v, int digits = 3) {
  std::ostringstream os;
  os.precision(digits);
  os << v;
  return os.str();
}

double rel_gap(long double a, long double b, long double floor = 0) {
  const long double s = std::max({std::fabs(a), std::fabs(b), floor});
  return s == 0 ? 0.0 : static_cast<double>(std::fabs(a - b) / s);
}

// theta(y) * prod_m (1 - e^{-y m})^{-1}, summed and multiplied out directly
long double euler_product_oracle(long double y) {
  long double theta = 1;
  for (long k = 1; std::exp(-y * k * k) > 1e-25L; ++k) theta += 2 * std::exp(-y * k * k);
  long double log_prod = 0;
  for (long m = 1; std::exp(-y * m) > 1e-25L; ++m) log_prod -= std::log1p(-std::exp(-y * m));
  return theta * std::exp(log_prod);
}

Outcome character_weight_sum() {
  double worst = 0;
  for (double y : {0.2, 0.5, 1.0, 2.0}) {
    worst = std::max(worst, rel_gap(char_eval(kLambda0, CharPoint{0, y}).real(), euler_product_oracle(y)));
  }
  return {worst <= 1e-8, "max relative gap " + fmt(worst) + " (tol 1e-8)"};
}

Outcome poisson_suite() {
  double worst_phi = 0;
  double worst_phi0 = 0;
  for (double t : {0.5, 1.0, 2.0, 4.0}) {
    for (double a : {0.5, 1.0, 2.0}) {
      // nodes of phi_a sit inside the grid, so compare against the row scale there
      double scale = 0;
      for (int i = 1; i <= 9; ++i) scale = std::max(scale, std::fabs(phi(a, {0.1 * i * t, t}).value));
      for (int i = 1; i <= 9; ++i) {
        const SpaceTimePoint p{0.1 * i * t, t};
        worst_phi = std::max(worst_phi, rel_gap(phi(a, p, kPhiEps, Regime::direct).value,
                                                phi(a, p, kPhiEps, Regime::poisson).value, 1e-3 * scale));
      }
    }
    for (int i = 1; i <= 9; ++i) {
      const SpaceTimePoint p{0.1 * i * t, t};
      worst_phi0 = std::max(worst_phi0, rel_gap(phi0(p, kPhiEps, Regime::direct).value,
                                                phi0(p, kPhiEps, Regime::poisson).value));
    }
  }
  double worst_jacobi = 0;
  for (double t : {0.1, 1.0, 10.0}) {
    for (int i = 0; i < 20; ++i) {
      const auto [lhs, rhs] = jacobi_identity_sides(0.05L * i, t);
      worst_jacobi = std::max(worst_jacobi, rel_gap(lhs, rhs));
    }
  }
  const bool ok = worst_phi <= 1e-10 && worst_phi0 <= 1e-10 && worst_jacobi <= 1e-12;
  return {ok, "phi_a " + fmt(worst_phi) + ", phi_0 " + fmt(worst_phi0) + " (tol 1e-10); jacobi " +
                  fmt(worst_jacobi) + " (tol 1e-12)"};
}

Outcome pde_residual() {
  const SpaceTimePoint p{0.5, 1};
  const double h = 1e-3;
  double worst_residual = 0;
  double worst_order = std::numeric_limits<double>::infinity();
  for (double a : {0.0, 1.0, kPi}) {
    const double r1 = harmonicity_residual(a, p, h);
    const double r2 = harmonicity_residual(a, p, 2 * h);
    const double r4 = harmonicity_residual(a, p, 4 * h);
    worst_residual = std::max(worst_residual, r1);
    worst_order = std::min({worst_order, std::log2(r2 / r1), std::log2(r4 / r2)});
  }
  return {worst_residual <= 1e-5 && worst_order >= 1.9,
          "max residual " + fmt(worst_residual) + " (tol 1e-5), min order " + fmt(worst_order) + " (>= 1.9)"};
}

Outcome oracle_equivalence() {
  int cases = 0;
  int mismatches = 0;
  for (std::int64_t n = 1; n <= 3; ++n) {
    for (std::int64_t x = 0; x <= n; ++x) {
      for (std::int64_t d : {0, -1, -2}) {
        const Weight lambda{n, x, d};
        ++cases;
        if (decompose(lambda, 6).entries != char_product_oracle(lambda, 6).entries) ++mismatches;
      }
    }
  }
  return {mismatches == 0, std::to_string(mismatches) + " mismatches in " + std::to_string(cases) + " cases"};
}

Outcome chain_rows() {
  std::mt19937_64 gen(0x5eed0005ULL);
  std::uniform_int_distribution<std::int64_t> level_dist(1, 6);
  double worst_literal = 0;
  double worst_projected = 0;
  double worst_identity = 0;
  for (int i = 0; i < 20; ++i) {
    const std::int64_t n = level_dist(gen);
    const std::int64_t x = std::uniform_int_distribution<std::int64_t>(0, n)(gen);
    for (double y : {0.3, 0.8}) {
      const TiltVector tilt{0, 2 * y};
      const auto literal = transition_row({n, x, 0}, tilt, 12, {}, std::numeric_limits<double>::infinity());
      worst_literal = std::max(worst_literal, literal.defect);
      const auto row = projected_row(n, x, tilt);
      worst_projected = std::max(worst_projected, std::fabs(row.raw_sum - 1));
      for (double a : {0.5, 1.0}) {
        long double lhs = 0;
        for (std::size_t j = 0; j < row.targets.size(); ++j) {
          lhs += row.probability[j] * char_ratio({n + 1, row.targets[j], 0}, a, y).real();
        }
        const long double rhs = char_ratio({n, x, 0}, a, y).real() * char_ratio(kLambda0, a, y).real();
        worst_identity = std::max(worst_identity, rel_gap(lhs, rhs));
      }
    }
  }
  const bool ok = worst_literal <= 1e-6 && worst_projected <= 1e-6 && worst_identity <= 1e-6;
  return {ok, "row defect at depth cut 12 " + fmt(worst_literal) + ", all depths " + fmt(worst_projected) +
                  " (tol 1e-6); one-step identity " + fmt(worst_identity) + " (tol 1e-6)"};
}

Outcome martingale_and_moments() {
  const DomainSpec spec{1, 1};
  const double x = 0.5;
  const double T = 1;
  const double dt = 1e-3;
  const std::size_t paths = 100'000;
  const std::uint64_t seed = 20240611;
  std::ostringstream detail;
  bool ok = true;

  const auto killed = simulate_ensemble(Estimator::killed_reweighted, x, spec, T, dt, paths, derive_seed(seed, 1));
  const auto w = mean_and_error(killed.weights);
  const bool w_ok = std::fabs(w.mean - 1) <= 3 * w.std_error;
  ok = ok && w_ok;
  detail << "E[w]=" << fmt(w.mean, 6) << " se " << fmt(w.std_error) << (w_ok ? "" : " (off)");

  const auto h = simulate_ensemble(Estimator::h_transform, x, spec, T, dt, paths, derive_seed(seed, 2));
  ok = ok && static_cast<double>(h.flagged) <= kMaxFlaggedFraction * static_cast<double>(paths);
  for (double a : {0.0, kPi / 2, kPi}) {
    std::vector<double> f;
    f.reserve(paths);
    for (double z : h.values) f.push_back(phi_ratio(a, {z, T + spec.u}));
    const auto e = mean_and_error(f);
    const double target = moment_identity_target(a, x, spec.u, T).value;
    const bool m_ok = std::fabs(e.mean - target) <= 3 * e.std_error + 0.02 * std::fabs(target);
    ok = ok && m_ok;
    detail << "; a=" << fmt(a);
    if (e.std_error > 0) {
      detail << " z=" << fmt((e.mean - target) / e.std_error);
    } else {
      detail << " gap=" << fmt(e.mean - target);  // the statistic is constant
    }
    if (!m_ok) detail << " (off)";
  }

  // step-size bias of the h-transform estimator from paired levels dt, dt/2, ...
  const double dt0 = 8e-3;
  const int levels = 4;
  const auto coupled = simulate_coupled_levels(x, spec, T, dt0, levels, paths, derive_seed(seed, 3));
  std::vector<double> log_dt;
  std::vector<double> log_gap;
  bool resolved = true;
  detail << "; level gaps";
  for (int l = 0; l + 1 < levels; ++l) {
    std::vector<double> diff(paths);
    for (std::size_t i = 0; i < paths; ++i) {
      diff[i] = phi_ratio(kPi, {coupled[l][i], T + spec.u}) - phi_ratio(kPi, {coupled[l + 1][i], T + spec.u});
    }
    const auto d = mean_and_error(diff);
    detail << ' ' << fmt(d.mean) << "+-" << fmt(d.std_error, 2);
    if (!(std::fabs(d.mean) > 3 * d.std_error)) resolved = false;
    log_dt.push_back(std::log(dt0 / std::pow(2.0, l)));
    log_gap.push_back(std::log(std::fabs(d.mean)));
  }
  if (!resolved) {
    ok = false;
    detail << "; bias slope indeterminate (gaps below 3 se)";
  } else {
    const double mx = std::accumulate(log_dt.begin(), log_dt.end(), 0.0) / static_cast<double>(log_dt.size());
    const double my = std::accumulate(log_gap.begin(), log_gap.end(), 0.0) / static_cast<double>(log_gap.size());
    double sxy = 0;
    double sxx = 0;
    for (std::size_t i = 0; i < log_dt.size(); ++i) {
      sxy += (log_dt[i] - mx) * (log_gap[i] - my);
      sxx += (log_dt[i] - mx) * (log_dt[i] - mx);
    }
    const double slope = sxy / sxx;
    const bool s_ok = slope >= 0.7 && slope <= 1.3;
    ok = ok && s_ok;
    detail << "; bias slope " << fmt(slope) << " (want [0.7, 1.3])";
  }
  return {ok, detail.str()};
}

Outcome main_convergence() {
  harness::RunConfig cfg;
  cfg.command = "converge";
  cfg.n_list = {25, 50, 100, 200};
  cfg.t = 1;
  cfg.x = 0.5;
  cfg.u = 1;
  cfg.paths = 10'000;
  const auto rep = harness::run_converge(cfg);
  std::ostringstream detail;
  detail << "monotone=" << rep.monotone << " final_within=" << rep.final_within << ";";
  for (const auto& row : rep.rows) {
    if (row.n == cfg.n_list.back()) {
      detail << " m=" << row.m << " |S-T|=" << fmt(row.error()) << " se " << fmt(row.std_error, 2);
    }
  }
  return {rep.pass(), detail.str()};
}

double simpson_mass(double x, double t, double u, int intervals) {
  const double h = u / intervals;
  double s = 0;
  for (int i = 1; i < intervals; ++i) s += interval_conditioned_kernel(x, i * h, t, u) * (i % 2 ? 4 : 2);
  return s * h / 3;  // the kernel vanishes at both ends
}

Outcome interval_limit() {
  harness::RunConfig cfg;
  cfg.command = "interval-limit";
  const auto rep = harness::run_interval_limit(cfg);
  double worst_mass = 0;
  for (double t : {0.1, 1.0, 3.0})
    for (double x : {0.2, 0.5, 0.7}) worst_mass = std::max(worst_mass, std::fabs(simpson_mass(x, t, 1, 1000) - 1));
  std::ostringstream detail;
  detail << "relative sup errors";
  for (const auto& row : rep.rows) detail << " c=" << row.c << ":" << fmt(row.relative);
  detail << " (monotone=" << rep.monotone << ", want <= 1e-3 at the last); q_t mass error " << fmt(worst_mass)
         << " (tol 1e-8)";
  return {rep.pass() && worst_mass <= 1e-8, detail.str()};
}

Outcome scaled_walk_variance() {
  bool ok = true;
  std::ostringstream detail;
  for (std::int64_t n : {50, 200}) {
    const auto dist = build_step_distribution(TiltVector::theorem(n));
    const std::size_t paths = 10'000;
    std::vector<double> end(paths);
    parallel_for_paths(paths, [&](std::size_t i) {
      Rng rng(derive_seed(0xacce5509ULL + static_cast<std::uint64_t>(n), i));
      std::int64_t pos = 0;
      for (std::int64_t s = 0; s < n; ++s) pos += sample_walk_step(dist, rng).alpha1_index;
      end[i] = static_cast<double>(pos) / static_cast<double>(n);
    });
    const double mean = std::accumulate(end.begin(), end.end(), 0.0) / paths;
    std::vector<double> sq(paths);
    for (std::size_t i = 0; i < paths; ++i) sq[i] = (end[i] - mean) * (end[i] - mean);
    const auto v = mean_and_error(sq);
    const double variance = v.mean * paths / (paths - 1);
    const bool n_ok = std::fabs(variance - 1) <= 3 * v.std_error;
    ok = ok && n_ok;
    detail << (n == 50 ? "" : "; ") << "n=" << n << " var " << fmt(variance, 5) << " se " << fmt(v.std_error, 2);
  }
  return {ok, detail.str()};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"sl2hat acceptance gate"};
  int only = 0;
  app.add_option("--criterion", only, "run a single criterion (1-9)")->check(CLI::Range(1, 9));
  CLI11_PARSE(app, argc, argv);

  const std::vector<Criterion> all{
      {1, "character vs weight sum", 1, character_weight_sum},
      {2, "poisson summation suite", 1, poisson_suite},
      {3, "pde residual", 1, pde_residual},
      {4, "oracle equivalence", 30, oracle_equivalence},
      {5, "row stochasticity and one-step identity", 120, chain_rows},
      {6, "martingale and moment identities", 600, martingale_and_moments},
      {7, "scaling limit convergence", 1800, main_convergence},
      {8, "interval limit", 10, interval_limit},
      {9, "scaled walk variance", 60, scaled_walk_variance},
  };

  bool all_ok = true;
  for (const auto& c : all) {
    if (only != 0 && c.id != only) continue;
    const auto start = std::chrono::steady_clock::now();
    Outcome out;
    try {
      out = c.body();
    } catch (const std::exception& e) {
      out = {false, std::string("threw: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool in_time = secs <= c.budget_seconds;
    const bool ok = out.pass && in_time;
    all_ok = all_ok && ok;
    std::cout << "criterion " << c.id << ' ' << (ok ? "PASS" : "FAIL") << " [" << c.name << "] " << out.detail
              << " | " << fmt(secs) << " s of " << c.budget_seconds << (in_time ? "" : " (over budget)") << std::endl;
  }
  return all_ok ? 0 : 1;
}
