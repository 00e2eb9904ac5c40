#pragma once

// Gaussian theta-type series shared by the character formulas and the
// space-time harmonic functions. With
//
//   sine_theta(A; X, T)   = sum_k sin(A (X + 2kT)) exp(-2(kX + k^2 T))
//   linear_theta(X, T)    = sum_k (X + 2kT)        exp(-2(kX + k^2 T))
//   gauss_theta(X, T)     = sum_k                  exp(-2(kX + k^2 T))
//
// each series has a Poisson-resummed dual whose terms decay like
// exp(-k^2 pi^2 / (2T)). The direct form is used for T >= pi/2 and the dual
// form below it, so that term counts stay small for every T > 0.

#include <complex>
#include <cstdint>
#include <optional>

namespace sl2hat {

enum class Regime { direct, poisson };

inline constexpr long double kRegimeSwitch = 1.57079632679489661923132169163975144L;  // pi/2

template <typename Value>
struct SeriesValue {
  Value value{};
  Regime regime = Regime::direct;
  int terms = 0;               // number of summands evaluated
  long double tail_bound = 0;  // bound on the neglected tail (absolute)
  long double abs_sum = 0;     // sum of |summand| * |common prefactor|
};

struct SeriesOptions {
  long double eps = 1e-12L;
  std::int64_t k_max_cap = 1'000'000;
  std::optional<Regime> force;  // unset: pick by T
};

SeriesValue<std::complex<long double>> sine_theta(std::complex<long double> A, long double X, long double T,
                                                  const SeriesOptions& opt = {});
SeriesValue<long double> linear_theta(long double X, long double T, const SeriesOptions& opt = {});
SeriesValue<long double> gauss_theta(long double X, long double T, const SeriesOptions& opt = {});

/// x-derivatives of linear_theta, returned as (value, d/dX value).
struct ValueAndSlope {
  long double value = 0;
  long double slope = 0;
  Regime regime = Regime::direct;
};
ValueAndSlope linear_theta_with_slope(long double X, long double T, long double eps = 1e-12L);

/// slope / value of the above in double precision, for inner loops.
double linear_theta_log_slope(double X, double T, double eps = 1e-12);

/// sum_k exp(2 i a k - y k^2), evaluated directly for y >= pi and through
/// sqrt(pi/y) sum_m exp(-(a - pi m)^2 / y) otherwise.
std::complex<long double> lattice_theta(std::complex<long double> a, long double y, long double eps = 1e-14L);

/// prod_{m>=1} (1 - exp(-y m))^{-1}, returned as its logarithm.
long double log_euler_factor(long double y, long double eps = 1e-18L);

}  // namespace sl2hat
