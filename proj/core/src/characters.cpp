#include "sl2hat/characters.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "sl2hat/theta_series.hpp"

namespace sl2hat {

namespace {

using cld = std::complex<long double>;

SeriesOptions options_from(const SeriesControl& ctrl) {
  SeriesOptions opt;
  opt.eps = ctrl.eps;
  opt.k_max_cap = ctrl.k_max_cap;
  return opt;
}

void check_point(const Weight& lambda, long double y) {
  if (!(y > 0)) throw std::domain_error("character: y must be positive (outside the convergence region)");
  if (lambda.level <= 0) {
    throw std::domain_error("character: level must be positive, got " + std::to_string(lambda.level));
  }
  if (!is_dominant(lambda)) throw std::invalid_argument("character: weight is not dominant: " + to_string(lambda));
}

void check_denominator(long double value, long double abs_sum, const SeriesControl& ctrl) {
  if (std::fabs(value) < 10 * ctrl.eps * abs_sum) {
    throw std::runtime_error("character: Weyl denominator lost to cancellation");
  }
}

// S(A; X, T) coordinates of the alternant for level n, index x.
struct ThetaArgs {
  long double X;
  long double T;
};

ThetaArgs theta_args(std::int64_t level, std::int64_t x, long double y) {
  return {y * static_cast<long double>(x + 1) / 2, y * static_cast<long double>(level + 2) / 2};
}

}  // namespace

void validate(const SeriesControl& ctrl) {
  if (!(ctrl.eps > 0)) throw std::invalid_argument("SeriesControl: eps must be positive");
  if (ctrl.k_max_cap < 8) throw std::invalid_argument("SeriesControl: k_max_cap must be at least 8");
}

cld weyl_numerator(std::int64_t level, std::int64_t x, cld a, long double y, const SeriesControl& ctrl) {
  validate(ctrl);
  if (!(y > 0)) throw std::domain_error("weyl_numerator: y must be positive");
  const auto [X, T] = theta_args(level, x, y);
  return sine_theta(a * (2 / y), X, T, options_from(ctrl)).value;
}

long double weyl_numerator0(std::int64_t level, std::int64_t x, long double y, const SeriesControl& ctrl) {
  validate(ctrl);
  if (!(y > 0)) throw std::domain_error("weyl_numerator0: y must be positive");
  const auto [X, T] = theta_args(level, x, y);
  return (2 / y) * linear_theta(X, T, options_from(ctrl)).value;
}

cld char_eval(const Weight& lambda, cld a, long double y, const SeriesControl& ctrl) {
  validate(ctrl);
  check_point(lambda, y);
  const SeriesOptions opt = options_from(ctrl);
  const long double shift = std::exp(static_cast<long double>(lambda.delta_depth) * y);
  const auto [X, T] = theta_args(lambda.level, lambda.alpha1_index, y);
  const auto [X0, T0] = theta_args(0, 0, y);
  if (std::abs(a) < kASwitch) {
    const auto num = linear_theta(X, T, opt);
    const auto den = linear_theta(X0, T0, opt);
    check_denominator(den.value, den.abs_sum, ctrl);
    return shift * num.value / den.value;
  }
  const cld A = a * (2 / y);
  const auto num = sine_theta(A, X, T, opt);
  const auto den = sine_theta(A, X0, T0, opt);
  check_denominator(std::abs(den.value), den.abs_sum, ctrl);
  return shift * num.value / den.value;
}

cld char_eval(const Weight& lambda, const CharPoint& pt, const SeriesControl& ctrl) {
  return char_eval(lambda, cld(pt.a, 0), pt.y, ctrl);
}

cld char_ratio(const Weight& lambda, double a, double y, const SeriesControl& ctrl) {
  validate(ctrl);
  check_point(lambda, y);
  if (a == 0) return 1;
  const SeriesOptions opt = options_from(ctrl);
  const auto [X, T] = theta_args(lambda.level, lambda.alpha1_index, y);
  const auto [X0, T0] = theta_args(0, 0, y);
  const auto lin = linear_theta(X, T, opt);
  const auto lin0 = linear_theta(X0, T0, opt);
  check_denominator(lin0.value, lin0.abs_sum, ctrl);
  if (std::fabs(a) < kASwitch) {
    // the ratio is 1 - O(a^2); below the switch it is indistinguishable from 1
    return 1;
  }
  const long double A = 2 * static_cast<long double>(a) / y;
  const auto num = sine_theta(A, X, T, opt);
  const auto den = sine_theta(A, X0, T0, opt);
  check_denominator(std::abs(den.value), den.abs_sum, ctrl);
  return (num.value / lin.value) / (den.value / lin0.value);
}

}  // namespace sl2hat
