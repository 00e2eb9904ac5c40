#pragma once

// Space-time harmonic functions built from theta series:
//   phi_a(x, t) = pi / sinh(a pi) * sum_k sin(a x + 2 k a t) exp(-2(k x + k^2 t))
//   phi_0(x, t) = sum_k (x + 2 k t) exp(-2(k x + k^2 t))
//   e(x, t)     = sum_k exp(-2(k x + k^2 t))
// e^{a^2 t/2} phi_a solves (1/2 d_xx + d_t) F = 0 and vanishes on x = 0 and x = t.

#include <cstdint>
#include <optional>
#include <utility>

#include "sl2hat/theta_series.hpp"

namespace sl2hat {

struct SpaceTimePoint {
  double x = 0;
  double t = 1;  // must be positive
};

struct PhiEval {
  double value = 0;
  Regime regime = Regime::direct;
  int terms_used = 0;
  double tail_bound = 0;
};

inline constexpr double kPhiEps = 1e-12;
/// phi rejects |a| pi above this; use phi_factorized instead.
inline constexpr double kSinhLimit = 700;

/// phi_a at p; a == 0 dispatches to phi0. `force` pins the summation regime.
PhiEval phi(double a, const SpaceTimePoint& p, double eps = kPhiEps, std::optional<Regime> force = std::nullopt);
PhiEval phi0(const SpaceTimePoint& p, double eps = kPhiEps, std::optional<Regime> force = std::nullopt);

/// Extended-precision values of the same functions, used for finite differences.
long double phi_ld(double a, long double x, long double t, double eps = kPhiEps);
long double phi0_ld(long double x, long double t, double eps = kPhiEps);

/// e(x, t).
PhiEval theta_gauss(const SpaceTimePoint& p, double eps = kPhiEps, std::optional<Regime> force = std::nullopt);

/// phi_{n pi / t}(x, t) = pi / sinh(n pi^2 / t) sin(n pi x / t) e(x, t), prefactor in log space.
double phi_factorized(std::int64_t n, const SpaceTimePoint& p, double eps = kPhiEps);

/// |(1/2 D_xx + D_t) phi_a + (a^2/2) phi_a| by central differences of width `step`.
/// Requires step < min(x, t - x, t) / 4.
double harmonicity_residual(double a, const SpaceTimePoint& p, double step);

/// phi_0(c x, c^2 t) for 0 < c <= 1.
double phi0_scaled(double c, const SpaceTimePoint& p, double eps = kPhiEps);

/// d/dx log phi_0 at p, 0 < x < t.
double log_derivative_x(const SpaceTimePoint& p, double eps = kPhiEps);

/// phi_a / phi_0 on the closed interval 0 <= x <= t; endpoint values are
/// continuous extensions.
double phi_ratio(double a, const SpaceTimePoint& p, double eps = kPhiEps);

/// (character ratio at lambda_n = [nt] L0 + [nx] a1/2 and argument (a/n, 2/n),
///  phi_a(x,t) / phi_0(x,t)).
std::pair<double, double> char_limit_check(std::int64_t n, double t, double x, double a);

/// Both sides of the Jacobi identity
///   (pi t)^{-1/2} sum_n exp(-(n + x)^2 / t) = sum_n cos(2 n pi x) exp(-n^2 pi^2 t),
/// each summed directly.
std::pair<long double, long double> jacobi_identity_sides(long double x, long double t, long double eps = 1e-18L);

}  // namespace sl2hat
