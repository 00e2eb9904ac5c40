#pragma once

// Normalized characters of integrable highest-weight modules of A1^(1),
// evaluated at h = i a a1 + y L0 (y > 0) through the Weyl-Kac alternant.
//
// For a dominant weight lambda = n L0 + (x/2) a1 the numerator is
//   N_lambda(a, y) = sum_k sin(a(x+1) + 2ak(n+2)) exp(-y(k(x+1) + k^2(n+2)))
// and the Weyl denominator is N_0, the same alternant for lambda = 0. When
// a -> 0 both sides are replaced by their a-derivatives,
//   N0_lambda(y) = sum_k (x+1 + 2k(n+2)) exp(-y(k(x+1) + k^2(n+2))).

#include <complex>
#include <cstdint>

#include "sl2hat/partitions.hpp"
#include "sl2hat/weights.hpp"

namespace sl2hat {

struct CharPoint {
  double a = 0;  // coefficient of i a1
  double y = 1;  // coefficient of L0, must be positive
};

struct SeriesControl {
  double eps = 1e-12;
  std::int64_t k_max_cap = 1'000'000;
};

/// Below this |a| the a -> 0 form of the alternant is used.
inline constexpr double kASwitch = 1e-8;

/// Throws std::invalid_argument unless eps > 0 and k_max_cap >= 8.
void validate(const SeriesControl& ctrl);

/// N_lambda(a, y) for level n and alpha1 index x, with complex a allowed
/// (a = -i h1/2 encodes a real tilt h1 along a1).
std::complex<long double> weyl_numerator(std::int64_t level, std::int64_t x, std::complex<long double> a,
                                         long double y, const SeriesControl& ctrl = {});

/// N0_lambda(y), the a-derivative of the numerator at a = 0.
long double weyl_numerator0(std::int64_t level, std::int64_t x, long double y, const SeriesControl& ctrl = {});

/// ch_lambda(i a a1 + y L0). A delta depth d multiplies the result by exp(d y).
/// Errors: std::domain_error for y <= 0 or level <= 0, std::invalid_argument for
/// non-dominant lambda, std::runtime_error when the denominator is lost to cancellation.
std::complex<long double> char_eval(const Weight& lambda, const CharPoint& pt, const SeriesControl& ctrl = {});

/// Same at a complex point a.
std::complex<long double> char_eval(const Weight& lambda, std::complex<long double> a, long double y,
                                    const SeriesControl& ctrl = {});

/// ch_lambda(i a a1 + y L0) / ch_lambda(y L0); exactly 1 at a = 0.
std::complex<long double> char_ratio(const Weight& lambda, double a, double y, const SeriesControl& ctrl = {});

}  // namespace sl2hat
