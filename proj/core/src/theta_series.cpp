#include "sl2hat/theta_series.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <utility>

#include "sl2hat/compensated.hpp"

namespace sl2hat {

namespace {

constexpr long double kPi = 3.14159265358979323846264338327950288L;

using cld = std::complex<long double>;

void check_args(long double T, const SeriesOptions& opt) {
  if (!(T > 0)) throw std::domain_error("theta series: T must be positive");
  if (!(opt.eps > 0)) throw std::invalid_argument("theta series: eps must be positive");
}

Regime pick(long double T, const SeriesOptions& opt) {
  if (opt.force) return *opt.force;
  return T >= kRegimeSwitch ? Regime::direct : Regime::poisson;
}

std::int64_t checked_cut(long double k, const SeriesOptions& opt) {
  if (!std::isfinite(k) || k > static_cast<long double>(opt.k_max_cap)) {
    throw std::overflow_error("theta series: summation range exceeds k_max_cap (" +
                              std::to_string(opt.k_max_cap) + ")");
  }
  return static_cast<std::int64_t>(std::ceil(k)) + 2;
}

// Direct form: smallest K such that terms beyond |k - c| > K - 2 fall below
// eps relative to the peak term, with c = shift/(2T) the centre of the Gaussian.
std::int64_t direct_cut(long double shift, long double T, long double extra_log, const SeriesOptions& opt) {
  const long double c = std::fabs(shift) / (2 * T);
  const long double geometric = -std::log1p(-std::exp(-2 * T));
  return checked_cut(c + std::sqrt((std::log(1 / opt.eps) + extra_log + geometric) / (2 * T)), opt);
}

std::int64_t poisson_cut(long double growth, long double T, const SeriesOptions& opt) {
  const long double centre = T * growth / kPi;
  return checked_cut(centre + std::sqrt(2 * T * std::log(1 / opt.eps)) / kPi, opt);
}

}  // namespace

SeriesValue<cld> sine_theta(cld A, long double X, long double T, const SeriesOptions& opt) {
  check_args(T, opt);
  SeriesValue<cld> out;
  out.regime = pick(T, opt);
  const long double im = std::fabs(A.imag());
  if (out.regime == Regime::direct) {
    const std::int64_t K = direct_cut(std::fabs(X) + im * T, T, im * std::fabs(X), opt);
    const std::int64_t centre = static_cast<std::int64_t>(std::llround(-X / (2 * T)));
    CompensatedSum<cld> sum;
    for (std::int64_t k = centre - K; k <= centre + K; ++k) {
      const long double kl = static_cast<long double>(k);
      sum += std::sin(A * (X + 2 * kl * T)) * std::exp(-2 * (kl * X + kl * kl * T));
    }
    out.value = sum.value();
    out.abs_sum = sum.abs_sum();
    out.terms = static_cast<int>(2 * K + 1);
    auto mag = [&](std::int64_t k) {
      const long double kl = static_cast<long double>(k);
      return std::exp(im * std::fabs(X + 2 * kl * T) - 2 * (kl * X + kl * kl * T));
    };
    out.tail_bound = 2 * (mag(centre - K - 1) + mag(centre + K + 1));
  } else {
    const long double re = std::fabs(A.real());
    const std::int64_t K = poisson_cut(re, T, opt);
    // exp(X^2/2T - A^2 T/2) 2 sinh(k pi A) e^{-k^2 pi^2/2T}, with the exponents
    // completed to squares so that large |A| neither overflows nor underflows
    const long double scale = std::sqrt(kPi / (2 * T));
    const long double gauss = X * X / (2 * T);
    auto bump = [&](long double shift) {
      const cld z = A - shift;
      return std::exp(cld(gauss) - z * z * (T / 2));
    };
    CompensatedSum<cld> sum;
    for (std::int64_t k = 1; k <= K; ++k) {
      const long double shift = static_cast<long double>(k) * kPi / T;
      sum += (bump(shift) - bump(-shift)) * std::sin(static_cast<long double>(k) * kPi * X / T);
    }
    out.value = scale * sum.value();
    out.abs_sum = scale * sum.abs_sum();
    out.terms = static_cast<int>(K);
    const long double s1 = static_cast<long double>(K + 1) * kPi / T;
    out.tail_bound = 4 * scale * std::exp(gauss + im * im * T / 2 - (T / 2) * (s1 - re) * (s1 - re));
  }
  return out;
}

SeriesValue<long double> linear_theta(long double X, long double T, const SeriesOptions& opt) {
  check_args(T, opt);
  SeriesValue<long double> out;
  out.regime = pick(T, opt);
  if (out.regime == Regime::direct) {
    // polynomial factor |X + 2kT| adds at most log(2K T) to the exponent
    const std::int64_t K = direct_cut(X, T, std::log1p(std::fabs(X) + 4 * T), opt) + 1;
    const std::int64_t centre = static_cast<std::int64_t>(std::llround(-X / (2 * T)));
    CompensatedSum<long double> sum;
    for (std::int64_t k = centre - K; k <= centre + K; ++k) {
      const long double kl = static_cast<long double>(k);
      sum += (X + 2 * kl * T) * std::exp(-2 * (kl * X + kl * kl * T));
    }
    out.value = sum.value();
    out.abs_sum = sum.abs_sum();
    out.terms = static_cast<int>(2 * K + 1);
    auto mag = [&](std::int64_t k) {
      const long double kl = static_cast<long double>(k);
      return std::fabs(X + 2 * kl * T) * std::exp(-2 * (kl * X + kl * kl * T));
    };
    out.tail_bound = 2 * (mag(centre - K - 1) + mag(centre + K + 1));
  } else {
    const std::int64_t K = poisson_cut(0, T, opt) + 1;
    const long double prefactor = std::exp(X * X / (2 * T)) * std::sqrt(kPi / (2 * T));
    CompensatedSum<long double> sum;
    for (std::int64_t k = 1; k <= K; ++k) {
      const long double kl = static_cast<long double>(k);
      sum += 2 * kl * kPi * std::exp(-kl * kl * kPi * kPi / (2 * T)) * std::sin(kl * kPi * X / T);
    }
    out.value = prefactor * sum.value();
    out.abs_sum = prefactor * sum.abs_sum();
    out.terms = static_cast<int>(K);
    const long double k1 = static_cast<long double>(K + 1);
    out.tail_bound = 4 * prefactor * k1 * kPi * std::exp(-k1 * k1 * kPi * kPi / (2 * T));
  }
  return out;
}

SeriesValue<long double> gauss_theta(long double X, long double T, const SeriesOptions& opt) {
  check_args(T, opt);
  SeriesValue<long double> out;
  out.regime = pick(T, opt);
  if (out.regime == Regime::direct) {
    const std::int64_t K = direct_cut(X, T, 0, opt);
    const std::int64_t centre = static_cast<std::int64_t>(std::llround(-X / (2 * T)));
    CompensatedSum<long double> sum;
    for (std::int64_t k = centre - K; k <= centre + K; ++k) {
      const long double kl = static_cast<long double>(k);
      sum += std::exp(-2 * (kl * X + kl * kl * T));
    }
    out.value = sum.value();
    out.abs_sum = sum.abs_sum();
    out.terms = static_cast<int>(2 * K + 1);
    auto mag = [&](std::int64_t k) {
      const long double kl = static_cast<long double>(k);
      return std::exp(-2 * (kl * X + kl * kl * T));
    };
    out.tail_bound = 2 * (mag(centre - K - 1) + mag(centre + K + 1));
  } else {
    const std::int64_t K = poisson_cut(0, T, opt);
    const long double prefactor = std::exp(X * X / (2 * T)) * std::sqrt(kPi / (2 * T));
    CompensatedSum<long double> sum;
    sum += 1;
    for (std::int64_t k = 1; k <= K; ++k) {
      const long double kl = static_cast<long double>(k);
      sum += 2 * std::exp(-kl * kl * kPi * kPi / (2 * T)) * std::cos(kl * kPi * X / T);
    }
    out.value = prefactor * sum.value();
    out.abs_sum = prefactor * sum.abs_sum();
    out.terms = static_cast<int>(K + 1);
    const long double k1 = static_cast<long double>(K + 1);
    out.tail_bound = 4 * prefactor * std::exp(-k1 * k1 * kPi * kPi / (2 * T));
  }
  return out;
}

namespace {

// Value and X-derivative of linear_theta with ratio recurrences for the
// Gaussian factors; Real selects the working precision.
template <typename Real>
std::pair<Real, Real> value_and_slope(Real X, Real T, std::int64_t K, bool direct) {
  const Real pi = static_cast<Real>(kPi);
  if (direct) {
    const Real q4 = std::exp(-4 * T);
    Real value = X;
    Real slope = 1;
    for (int dir : {+1, -1}) {
      Real term = 1;
      Real ratio = std::exp(-2 * (dir * X + T));
      for (std::int64_t k = 1; k <= K; ++k) {
        term *= ratio;
        ratio *= q4;
        const Real kl = static_cast<Real>(dir * k);
        const Real lin = X + 2 * kl * T;
        value += lin * term;
        slope += term * (1 - 2 * kl * lin);
      }
    }
    return {value, slope};
  }
  const Real g = std::exp(-pi * pi / (2 * T));
  const Real g2 = g * g;
  const Real theta = pi * X / T;
  const Real s1 = std::sin(theta);
  const Real c1 = std::cos(theta);
  Real gk = g;          // exp(-k^2 pi^2 / 2T)
  Real gstep = g * g2;  // exp(-(2k+1) pi^2 / 2T)
  Real sk = s1;
  Real ck = c1;
  Real G = 0;
  Real dG = 0;
  for (std::int64_t k = 1; k <= K; ++k) {
    const Real kpi = static_cast<Real>(k) * pi;
    G += kpi * gk * sk;
    dG += kpi * kpi / T * gk * ck;
    gk *= gstep;
    gstep *= g2;
    const Real sn = sk * c1 + ck * s1;
    ck = ck * c1 - sk * s1;
    sk = sn;
  }
  const Real prefactor = 2 * std::exp(X * X / (2 * T)) * std::sqrt(pi / (2 * T));
  return {prefactor * G, prefactor * (X / T * G + dG)};
}

std::int64_t slope_cut(long double X, long double T, long double eps, bool direct) {
  SeriesOptions opt;
  opt.eps = eps;
  return direct ? direct_cut(X, T, std::log1p(std::fabs(X) + 4 * T), opt) + 1 : poisson_cut(0, T, opt) + 1;
}

}  // namespace

ValueAndSlope linear_theta_with_slope(long double X, long double T, long double eps) {
  if (!(T > 0)) throw std::domain_error("linear_theta_with_slope: T must be positive");
  const bool direct = T >= kRegimeSwitch;
  const auto [value, slope] = value_and_slope<long double>(X, T, slope_cut(X, T, eps, direct), direct);
  return {value, slope, direct ? Regime::direct : Regime::poisson};
}

double linear_theta_log_slope(double X, double T, double eps) {
  if (!(T > 0)) throw std::domain_error("linear_theta_log_slope: T must be positive");
  const bool direct = T >= static_cast<double>(kRegimeSwitch);
  const auto [value, slope] = value_and_slope<double>(X, T, slope_cut(X, T, eps, direct), direct);
  return slope / value;
}

std::complex<long double> lattice_theta(std::complex<long double> a, long double y, long double eps) {
  if (!(y > 0)) throw std::domain_error("lattice_theta: y must be positive");
  CompensatedSum<cld> sum;
  if (y >= kPi) {
    const long double centre = -a.imag() / y;
    const auto K = static_cast<std::int64_t>(std::ceil(std::sqrt(std::log(1 / eps) / y))) + 2;
    const auto c = static_cast<std::int64_t>(std::llround(centre));
    for (std::int64_t k = c - K; k <= c + K; ++k) {
      const long double kl = static_cast<long double>(k);
      sum += std::exp(cld(0, 2) * a * kl - y * kl * kl);
    }
    return sum.value();
  }
  const auto c = static_cast<std::int64_t>(std::llround(a.real() / kPi));
  const auto K = static_cast<std::int64_t>(std::ceil(std::sqrt(y * std::log(1 / eps)) / kPi)) + 2;
  for (std::int64_t m = c - K; m <= c + K; ++m) {
    const cld shifted = a - kPi * static_cast<long double>(m);
    sum += std::exp(-shifted * shifted / y);
  }
  return std::sqrt(kPi / y) * sum.value();
}

long double log_euler_factor(long double y, long double eps) {
  if (!(y > 0)) throw std::domain_error("log_euler_factor: y must be positive");
  CompensatedSum<long double> sum;
  const long double q = std::exp(-y);
  long double qm = q;
  for (std::int64_t m = 1;; ++m) {
    const long double term = -std::log1p(-qm);
    sum += term;
    if (term < eps * sum.value() * (1 - q) || qm == 0) break;
    qm *= q;
  }
  return sum.value();
}

}  // namespace sl2hat
