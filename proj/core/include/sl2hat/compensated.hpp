#pragma once

#include <cmath>
#include <complex>

namespace sl2hat {

/// Neumaier (improved Kahan) summation. Also tracks sum |term| so callers can
/// judge how much cancellation a series went through.
template <typename Real>
class CompensatedSum {
 public:
  void add(Real v) {
    const Real t = sum_ + v;
    if (std::fabs(sum_) >= std::fabs(v)) {
      comp_ += (sum_ - t) + v;
    } else {
      comp_ += (v - t) + sum_;
    }
    sum_ = t;
    abs_ += std::fabs(v);
  }
  CompensatedSum& operator+=(Real v) {
    add(v);
    return *this;
  }
  Real value() const { return sum_ + comp_; }
  Real abs_sum() const { return abs_; }

 private:
  Real sum_ = 0;
  Real comp_ = 0;
  Real abs_ = 0;
};

template <typename Real>
class CompensatedSum<std::complex<Real>> {
 public:
  void add(std::complex<Real> v) {
    re_.add(v.real());
    im_.add(v.imag());
  }
  CompensatedSum& operator+=(std::complex<Real> v) {
    add(v);
    return *this;
  }
  std::complex<Real> value() const { return {re_.value(), im_.value()}; }
  Real abs_sum() const { return re_.abs_sum() + im_.abs_sum(); }

 private:
  CompensatedSum<Real> re_;
  CompensatedSum<Real> im_;
};

}  // namespace sl2hat
