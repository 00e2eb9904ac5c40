#include "sl2hat/theta_harmonic.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "sl2hat/characters.hpp"
#include "sl2hat/compensated.hpp"

namespace sl2hat {

namespace {

constexpr long double kPi = 3.14159265358979323846264338327950288L;

void check_time(long double t) {
  if (!(t > 0)) throw std::domain_error("theta_harmonic: t must be positive");
}

SeriesOptions series_options(double eps, std::optional<Regime> force) {
  SeriesOptions opt;
  opt.eps = eps;
  opt.force = force;
  return opt;
}

void check_sinh(double a) {
  if (std::fabs(a) * static_cast<double>(kPi) > kSinhLimit) {
    throw std::overflow_error("phi: |a| pi = " + std::to_string(std::fabs(a) * static_cast<double>(kPi)) +
                              " overflows sinh; use phi_factorized for a = n pi / t");
  }
}

PhiEval to_eval(long double value, Regime regime, int terms, long double tail) {
  return {static_cast<double>(value), regime, terms, static_cast<double>(tail)};
}

// log(sinh(z)) for z > 0 without overflow.
long double log_sinh(long double z) { return z + std::log1p(-std::exp(-2 * z)) - std::log(2.0L); }

}  // namespace

PhiEval phi(double a, const SpaceTimePoint& p, double eps, std::optional<Regime> force) {
  if (a == 0) return phi0(p, eps, force);
  check_time(p.t);
  check_sinh(a);
  const auto s = sine_theta(static_cast<long double>(a), p.x, p.t, series_options(eps, force));
  const long double scale = kPi / std::sinh(static_cast<long double>(a) * kPi);
  return to_eval(scale * s.value.real(), s.regime, s.terms, std::fabs(scale) * s.tail_bound);
}

PhiEval phi0(const SpaceTimePoint& p, double eps, std::optional<Regime> force) {
  check_time(p.t);
  const auto s = linear_theta(p.x, p.t, series_options(eps, force));
  return to_eval(s.value, s.regime, s.terms, s.tail_bound);
}

long double phi_ld(double a, long double x, long double t, double eps) {
  if (a == 0) return phi0_ld(x, t, eps);
  check_time(t);
  check_sinh(a);
  const auto s = sine_theta(static_cast<long double>(a), x, t, series_options(eps, std::nullopt));
  return kPi / std::sinh(static_cast<long double>(a) * kPi) * s.value.real();
}

long double phi0_ld(long double x, long double t, double eps) {
  check_time(t);
  return linear_theta(x, t, series_options(eps, std::nullopt)).value;
}

PhiEval theta_gauss(const SpaceTimePoint& p, double eps, std::optional<Regime> force) {
  check_time(p.t);
  const auto s = gauss_theta(p.x, p.t, series_options(eps, force));
  return to_eval(s.value, s.regime, s.terms, s.tail_bound);
}

double phi_factorized(std::int64_t n, const SpaceTimePoint& p, double eps) {
  check_time(p.t);
  if (n < 1) throw std::invalid_argument("phi_factorized: n must be positive");
  const long double t = p.t;
  const long double nl = static_cast<long double>(n);
  const long double e = gauss_theta(p.x, t, series_options(eps, std::nullopt)).value;
  const long double log_scale = std::log(kPi) - log_sinh(nl * kPi * kPi / t);
  return static_cast<double>(std::exp(log_scale) * std::sin(nl * kPi * p.x / t) * e);
}

double harmonicity_residual(double a, const SpaceTimePoint& p, double step) {
  check_time(p.t);
  const double margin = std::min({p.x, p.t - p.x, p.t});
  if (!(step > 0) || !(step < margin / 4)) {
    throw std::invalid_argument("harmonicity_residual: step must be positive and below min(x, t-x, t)/4");
  }
  const long double h = step;
  const long double x = p.x;
  const long double t = p.t;
  const long double f = phi_ld(a, x, t);
  const long double fxx = (phi_ld(a, x + h, t) - 2 * f + phi_ld(a, x - h, t)) / (h * h);
  const long double ft = (phi_ld(a, x, t + h) - phi_ld(a, x, t - h)) / (2 * h);
  const long double a2 = static_cast<long double>(a) * a;
  return static_cast<double>(std::fabs(fxx / 2 + ft + a2 / 2 * f));
}

double phi0_scaled(double c, const SpaceTimePoint& p, double eps) {
  if (!(c > 0 && c <= 1)) throw std::domain_error("phi0_scaled: c must lie in (0, 1]");
  check_time(p.t);
  return phi0({c * p.x, c * c * p.t}, eps).value;
}

double log_derivative_x(const SpaceTimePoint& p, double eps) {
  check_time(p.t);
  if (!(p.x > 0 && p.x < p.t)) {
    throw std::domain_error("log_derivative_x: x must lie strictly inside (0, t)");
  }
  const auto vs = linear_theta_with_slope(p.x, p.t, eps);
  return static_cast<double>(vs.slope / vs.value);
}

double phi_ratio(double a, const SpaceTimePoint& p, double eps) {
  check_time(p.t);
  if (p.x < 0 || p.x > p.t) throw std::domain_error("phi_ratio: x outside [0, t]");
  if (a == 0) return 1;
  const long double t = p.t;
  const long double edge = 1e-9L * t;
  auto f = [&](long double x) { return phi_ld(a, x, t, eps) / phi0_ld(x, t, eps); };
  const long double x = p.x;
  if (x > edge && t - x > edge) return static_cast<double>(f(x));
  // quadratic through three interior nodes, evaluated at the endpoint side
  const long double d = 1e-3L * t;
  const long double sgn = x <= edge ? 1 : -1;
  const long double base = x <= edge ? 0 : t;
  const long double u = (x - base) * sgn / d;  // position in units of d, in [0, 1e-6]
  const long double f1 = f(base + sgn * d);
  const long double f2 = f(base + sgn * 2 * d);
  const long double f3 = f(base + sgn * 3 * d);
  const long double l1 = (u - 2) * (u - 3) / 2;
  const long double l2 = -(u - 1) * (u - 3);
  const long double l3 = (u - 1) * (u - 2) / 2;
  return static_cast<double>(l1 * f1 + l2 * f2 + l3 * f3);
}

std::pair<double, double> char_limit_check(std::int64_t n, double t, double x, double a) {
  if (!(t > 0 && x > 0 && x < t)) throw std::domain_error("char_limit_check: need 0 < x < t");
  if (n < 1) throw std::invalid_argument("char_limit_check: n must be positive");
  const double nd = static_cast<double>(n);
  const Weight lambda{static_cast<std::int64_t>(std::floor(nd * t)), static_cast<std::int64_t>(std::floor(nd * x)), 0};
  const double lhs = static_cast<double>(char_ratio(lambda, a / nd, 2 / nd).real());
  const double rhs = phi_ratio(a, {x, t});
  return {lhs, rhs};
}

std::pair<long double, long double> jacobi_identity_sides(long double x, long double t, long double eps) {
  check_time(t);
  const long double log_inv = std::log(1 / eps);
  CompensatedSum<long double> left;
  const auto centre = static_cast<std::int64_t>(std::llround(-x));
  const auto kl = static_cast<std::int64_t>(std::ceil(std::sqrt(t * log_inv))) + 2;
  for (std::int64_t n = centre - kl; n <= centre + kl; ++n) {
    const long double z = static_cast<long double>(n) + x;
    left += std::exp(-z * z / t);
  }
  CompensatedSum<long double> right;
  const auto kr = static_cast<std::int64_t>(std::ceil(std::sqrt(log_inv / (kPi * kPi * t)))) + 2;
  for (std::int64_t n = -kr; n <= kr; ++n) {
    const long double nl = static_cast<long double>(n);
    right += std::cos(2 * nl * kPi * x) * std::exp(-nl * nl * kPi * kPi * t);
  }
  return {left.value() / std::sqrt(kPi * t), right.value()};
}

}  // namespace sl2hat
