#pragma once

// Brownian motion in the space-time domain {0 < z < c s + u}, conditioned
// through the space-time harmonic function phi_0^{(c)}(z, s + u/c). With
// c = 1 this is the measure Q_{x,u}.
//
// Two estimators are provided:
//  * h-transform: Euler-Maruyama for dX = d/dx log phi_0^{(c)}(X, s + u/c) ds + dW;
//  * killed-reweighted: plain Brownian paths, killed on exit (detected with
//    the exact Brownian-bridge crossing probability for linear boundaries),
//    weighted by phi_0^{(c)}(X_T, T + u/c) / phi_0^{(c)}(x, u/c).

#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

#include "sl2hat/random.hpp"

namespace sl2hat {

struct DomainSpec {
  double u = 1;
  double c = 1;

  /// Upper boundary at simulation time s.
  double upper(double s) const { return c * s + u; }
};

/// Throws std::domain_error unless u > 0 and 0 < c <= 1.
void validate(const DomainSpec& spec);

struct PathSample {
  double x0 = 0;
  DomainSpec spec;
  double dt = 0;
  std::vector<double> values;  // positions at grid times 0, dt, 2 dt, ...
  double weight = 1;
  bool absorbed = false;
  bool flagged = false;  // boundary guard gave up
  std::uint64_t seed = 0;
};

inline constexpr int kMaxHalvings = 20;
inline constexpr double kMaxFlaggedFraction = 1e-3;

/// Drift d/dx log phi_0^{(c)}(x, s + u/c) of the h-transform.
double conditioned_drift(double x, double s, const DomainSpec& spec);

/// phi_0^{(c)}(x, s + u/c).
double conditioned_harmonic(double x, double s, const DomainSpec& spec);

/// One h-transform path on [0, T]. A step that would leave the domain is
/// split with a Brownian-bridge midpoint (at most kMaxHalvings times), after
/// which the path is flagged.
PathSample simulate_conditioned_path(double x, const DomainSpec& spec, double T, double dt, std::uint64_t seed);

/// One killed Brownian path on [0, T] with its Q-weight.
PathSample simulate_killed_reweighted(double x, const DomainSpec& spec, double T, double dt, std::uint64_t seed);

/// Terminal values of many paths; path i uses derive_seed(seed, i).
struct TerminalEnsemble {
  std::vector<double> values;   // X_T (killed paths keep their last grid value)
  std::vector<double> weights;  // 1 for the h-transform, Q-weight for killed paths
  std::vector<double> checkpoint;  // X at the checkpoint time when requested
  std::size_t flagged = 0;
  std::size_t absorbed = 0;
};

enum class Estimator { h_transform, killed_reweighted };

/// `checkpoint` > 0 also records the position at that time (rounded to the grid).
TerminalEnsemble simulate_ensemble(Estimator est, double x, const DomainSpec& spec, double T, double dt,
                                   std::size_t paths, std::uint64_t seed, double checkpoint = 0,
                                   unsigned workers = 0);

/// h-transform terminal values at several step sizes dt_0 / 2^l driven by the
/// same Brownian path per index (finest grid increments summed for coarser ones).
/// Result [level][path].
std::vector<std::vector<double>> simulate_coupled_levels(double x, const DomainSpec& spec, double T, double dt0,
                                                         int levels, std::size_t paths, std::uint64_t seed,
                                                         unsigned workers = 0);

struct MomentTarget {
  double a = 0;
  double x = 0;
  double u = 0;
  double t = 0;
  double value = 0;  // phi_a(x,u)/phi_0(x,u) exp(-a^2 t / 2)
};

MomentTarget moment_identity_target(double a, double x, double u, double t);

/// (sin(pi y/u) / sin(pi x/u)) e^{pi^2 t / 2u^2} p0_t(x, y), with the killed
/// heat kernel p0_t = (2/u) sum_k sin(k pi x/u) sin(k pi y/u) e^{-k^2 pi^2 t / 2u^2}.
double interval_conditioned_kernel(double x, double y, double t, double u);
double killed_heat_kernel(double x, double y, double t, double u);

struct IntervalLimitError {
  double sup_error = 0;
  double target_sup = 0;
  double relative = 0;  // sup_error / target_sup
};

/// sup over an interior grid of |phi_0^{(c)}(y, t + u/c) / phi_0^{(c)}(x, u/c)
///   - sin(pi y/u) / sin(pi x/u) e^{pi^2 t / 2u^2}|.
IntervalLimitError interval_limit_error(double c, double x, double u, double t, int grid);

struct MeanEstimate {
  double mean = 0;
  double std_error = 0;
};

MeanEstimate mean_and_error(const std::vector<double>& v);

/// CSV rows for a run: estimator,a,t,estimate,std_error,target,z_score.
struct MomentRow {
  std::string estimator;
  double a = 0;
  double t = 0;
  double estimate = 0;
  double std_error = 0;
  double target = 0;
  double z_score = 0;
};
void write_moment_csv(std::ostream& os, const std::vector<MomentRow>& rows);

/// Optional path dump: path_id,step,time,position,weight.
void write_path_csv(std::ostream& os, const std::vector<PathSample>& paths);

}  // namespace sl2hat
