#include "sl2hat/tensor_decomp.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <utility>

#include "sl2hat/compensated.hpp"
#include "sl2hat/partitions.hpp"

namespace sl2hat {

namespace {

__extension__ typedef __int128 i128;

void require_source(const Weight& lambda, const char* who) {
  if (lambda.level < 1 || !is_dominant(lambda)) {
    throw std::invalid_argument(std::string(who) + ": lambda must be dominant of positive level, got " +
                                to_string(lambda));
  }
}

std::int64_t narrow(i128 v, const char* who) {
  if (v > std::numeric_limits<std::int64_t>::max() || v < std::numeric_limits<std::int64_t>::min()) {
    throw std::overflow_error(std::string(who) + ": multiplicity exceeds 64-bit range");
  }
  return static_cast<std::int64_t>(v);
}

// Real roots of a2 k^2 + b k + c = 0 (a2 > 0); empty interval when none.
std::pair<long double, long double> support_interval(long double a2, long double b, long double c) {
  const long double disc = b * b - 4 * a2 * c;
  if (disc < 0) return {1, 0};
  const long double r = std::sqrt(disc);
  return {(-b - r) / (2 * a2), (-b + r) / (2 * a2)};
}

// Key (depth below top, -x) so that std::map iterates depth ascending, x descending.
using FormalKey = std::pair<std::int64_t, std::int64_t>;
using FormalSeries = std::map<FormalKey, std::int64_t>;

FormalSeries freudenthal_table(const Weight& lambda, std::int64_t depth) {
  const std::int64_t n = lambda.level;
  const std::int64_t xl = lambda.alpha1_index;
  FormalSeries mult;
  auto get = [&](std::int64_t j, std::int64_t x) -> std::int64_t {
    if (j < 0) return 0;
    auto it = mult.find({j, -x});
    return it == mult.end() ? 0 : it->second;
  };
  for (std::int64_t j = 0; j <= depth; ++j) {
    const std::int64_t xmax = xl + 2 * j;
    for (std::int64_t x = xmax; x >= -xmax; x -= 2) {
      if (j == 0 && x == xl) {
        mult[{0, -xl}] = 1;
        continue;
      }
      // twice the inner products throughout
      const i128 lhs = 4 * static_cast<i128>(n + 2) * j + static_cast<i128>(xl + 1) * (xl + 1) -
                       static_cast<i128>(x + 1) * (x + 1);
      i128 rhs = 0;
      // real roots a1 + m delta, m >= 0
      for (std::int64_t m = 0; m <= j; ++m) {
        for (std::int64_t i = 1;; ++i) {
          const std::int64_t jj = j - i * m;
          const std::int64_t xx = x + 2 * i;
          if (jj < 0 || xx > xl + 2 * jj) break;
          rhs += (2 * static_cast<i128>(n) * m + 2 * static_cast<i128>(x) + 4 * static_cast<i128>(i)) * get(jj, xx);
        }
      }
      // real roots -a1 + m delta, m >= 1
      for (std::int64_t m = 1; m <= j; ++m) {
        for (std::int64_t i = 1; j - i * m >= 0; ++i) {
          const std::int64_t jj = j - i * m;
          const std::int64_t xx = x - 2 * i;
          rhs += (2 * static_cast<i128>(n) * m - 2 * static_cast<i128>(x) + 4 * static_cast<i128>(i)) * get(jj, xx);
        }
      }
      // imaginary roots m delta, multiplicity one
      for (std::int64_t m = 1; m <= j; ++m) {
        for (std::int64_t i = 1; j - i * m >= 0; ++i) {
          rhs += 2 * static_cast<i128>(n) * m * get(j - i * m, x);
        }
      }
      rhs *= 2;
      if (lhs == 0) {
        if (rhs != 0) throw std::logic_error("freudenthal: singular coefficient with nonzero right-hand side");
        continue;
      }
      if (rhs % lhs != 0) throw std::logic_error("freudenthal: non-integral multiplicity");
      const std::int64_t value = narrow(rhs / lhs, "freudenthal");
      if (value < 0) throw std::logic_error("freudenthal: negative multiplicity");
      if (value != 0) mult[{j, -x}] = value;
    }
  }
  return mult;
}

}  // namespace

std::int64_t branching_mult(const Weight& lambda, const Weight& beta) {
  require_source(lambda, "branching_mult");
  if (beta.level != lambda.level + 1) {
    throw std::invalid_argument("branching_mult: level mismatch, level(beta) = " + std::to_string(beta.level) +
                                " but level(lambda) + 1 = " + std::to_string(lambda.level + 1));
  }
  if (!is_dominant(beta)) return 0;
  if ((beta.alpha1_index - lambda.alpha1_index) % 2 != 0) return 0;

  const Weight shifted = beta + kRho;
  const Weight lr = lambda + kRho;
  const Weight lr_reflected = weyl_reflect(SimpleRoot::alpha1, lr);

  auto term = [&](std::int64_t k, const Weight& base) -> std::uint64_t {
    return weight_mult_basic(shifted - weyl_translate(k, base));
  };

  i128 total = 0;
  std::int64_t lo_scanned = 0;
  std::int64_t hi_scanned = 0;
  for (int dir : {+1, -1}) {
    int zeros = 0;
    for (std::int64_t step = (dir > 0 ? 0 : 1);; ++step) {
      if (step > kWeylScanCap) throw std::runtime_error("branching_mult: Weyl scan exceeded cap");
      const std::int64_t k = dir * step;
      const std::uint64_t plus = term(k, lr);
      const std::uint64_t minus = term(k, lr_reflected);
      total += static_cast<i128>(plus) - static_cast<i128>(minus);
      zeros = (plus == 0 && minus == 0) ? zeros + 1 : 0;
      if (dir > 0) hi_scanned = k; else lo_scanned = k;
      if (zeros >= 3 && step >= 3) break;
    }
  }

  // The support of each signature is the integer set where a convex quadratic
  // in k stays below the depth drop; check the scan covered it.
  const long double N = static_cast<long double>(lambda.level + 2);
  const long double x1 = static_cast<long double>(lambda.alpha1_index + 1);
  const long double J = static_cast<long double>(beta.alpha1_index - lambda.alpha1_index) / 2;
  const long double Jp = static_cast<long double>(beta.alpha1_index + lambda.alpha1_index) / 2 + 1;
  const long double D = static_cast<long double>(lambda.delta_depth - beta.delta_depth);
  for (const auto& [lo, hi] : {support_interval(N * (N + 1), x1 - 2 * J * N, J * J - D),
                               support_interval(N * (N + 1), -(x1 + 2 * Jp * N), Jp * Jp - D)}) {
    if (lo > hi) continue;
    if (std::ceil(lo) < lo_scanned || std::floor(hi) > hi_scanned) {
      throw std::logic_error("branching_mult: Weyl scan stopped inside the support");
    }
  }

  const std::int64_t m = narrow(total, "branching_mult");
  if (m < 0) {
    throw std::logic_error("branching_mult: negative multiplicity for beta = " + to_string(beta));
  }
  return m;
}

Decomposition decompose(const Weight& lambda, std::int64_t depth_cut) {
  require_source(lambda, "decompose");
  if (depth_cut < 0) throw std::invalid_argument("decompose: depth_cut must be nonnegative");
  Decomposition out;
  out.source = lambda;
  out.depth_cut = depth_cut;
  const std::int64_t top = lambda.level + 1;
  for (std::int64_t k = 0; k * k <= depth_cut; ++k) {
    for (std::int64_t sign : {+1, -1}) {
      if (k == 0 && sign < 0) continue;
      const std::int64_t kk = sign * k;
      const std::int64_t x = lambda.alpha1_index + 2 * kk;
      if (x < 0 || x > top) continue;
      for (std::int64_t s = 0; k * k + s <= depth_cut; ++s) {
        const Weight beta{top, x, lambda.delta_depth - k * k - s};
        const std::int64_t m = branching_mult(lambda, beta);
        if (m > 0) out.entries.emplace(beta, m);
      }
    }
  }
  return out;
}

std::map<Weight, std::int64_t> freudenthal_multiplicities(const Weight& lambda, std::int64_t depth) {
  require_source(lambda, "freudenthal_multiplicities");
  if (depth < 0) throw std::invalid_argument("freudenthal_multiplicities: depth must be nonnegative");
  std::map<Weight, std::int64_t> out;
  for (const auto& [key, m] : freudenthal_table(lambda, depth)) {
    out.emplace(Weight{lambda.level, -key.second, lambda.delta_depth - key.first}, m);
  }
  return out;
}

Decomposition char_product_oracle(const Weight& lambda, std::int64_t depth) {
  require_source(lambda, "char_product_oracle");
  if (lambda.level > 6 || depth > 10 || depth < 0) {
    throw std::invalid_argument("char_product_oracle: needs level <= 6 and 0 <= depth <= 10");
  }
  const FormalSeries v_lambda = freudenthal_table(lambda, depth);

  // ch_{L0} * ch_lambda, depth measured from lambda + L0
  FormalSeries product;
  for (std::int64_t k = 0; k * k <= depth; ++k) {
    for (std::int64_t sign : {+1, -1}) {
      if (k == 0 && sign < 0) continue;
      for (std::int64_t s = 0; k * k + s <= depth; ++s) {
        const std::int64_t m0 = static_cast<std::int64_t>(partition_count(s));
        const std::int64_t j0 = k * k + s;
        for (const auto& [key, m] : v_lambda) {
          if (key.first + j0 > depth) continue;
          const std::int64_t x = -key.second + 2 * sign * k;
          product[{key.first + j0, -x}] += m0 * m;
        }
      }
    }
  }

  Decomposition out;
  out.source = lambda;
  out.depth_cut = depth;
  const std::int64_t top = lambda.level + 1;
  for (auto it = product.begin(); it != product.end(); ++it) {
    const std::int64_t m = it->second;
    if (m == 0) continue;
    const std::int64_t j = it->first.first;
    const std::int64_t x = -it->first.second;
    const Weight beta{top, x, lambda.delta_depth - j};
    if (m < 0 || !is_dominant(beta)) {
      throw std::runtime_error("char_product_oracle: remainder is not a sum of characters at " + to_string(beta));
    }
    out.entries.emplace(beta, m);
    for (const auto& [key, mb] : freudenthal_table(beta, depth - j)) {
      product[{j + key.first, key.second}] -= m * mb;
    }
    if (it->second != 0) throw std::logic_error("char_product_oracle: peeling left a residue");
  }
  return out;
}

long double branching_theta(std::int64_t level, std::int64_t x, std::int64_t x_target, long double y) {
  if (!(y > 0)) throw std::domain_error("branching_theta: y must be positive");
  if (level < 1 || x < 0 || x > level) throw std::invalid_argument("branching_theta: source not dominant");
  if (x_target < 0 || x_target > level + 1 || (x_target - x) % 2 != 0) return 0;
  const std::int64_t N = level + 2;
  const std::int64_t J = (x_target - x) / 2;
  const std::int64_t Jp = (x + x_target) / 2 + 1;
  // q^{E+_k} - q^{E-_k} with E-_k - E+_k = (x_target + 1)(x + 1 + 2kN)
  auto term = [&](std::int64_t k, long double& exponent) {
    const long double e_plus = static_cast<long double>((J - k * N) * (J - k * N) + k * (x + 1) + k * k * N);
    const long double gap = static_cast<long double>((x_target + 1) * (x + 1 + 2 * k * N));
    exponent = y * e_plus;
    return -std::exp(-y * e_plus) * std::expm1(-y * gap);
  };
  CompensatedSum<long double> sum;
  long double exponent = 0;
  sum += term(0, exponent);
  constexpr long double kCut = 50;  // exp(-50) relative to an O(1) leading term
  for (int dir : {+1, -1}) {
    for (std::int64_t step = 1;; ++step) {
      sum += term(dir * step, exponent);
      const long double other = y * static_cast<long double>((Jp + dir * step * N) * (Jp + dir * step * N) +
                                                             dir * step * (x + 1) + step * step * N);
      if (step >= 2 && exponent > kCut && other > kCut) break;
    }
  }
  return sum.value();
}

std::vector<std::int64_t> branching_coefficients(std::int64_t level, std::int64_t x, std::int64_t x_target,
                                                 std::int64_t max_depth) {
  if (level < 1 || x < 0 || x > level) throw std::invalid_argument("branching_coefficients: source not dominant");
  if (max_depth < 0) throw std::invalid_argument("branching_coefficients: negative depth");
  std::vector<std::int64_t> out(static_cast<std::size_t>(max_depth + 1), 0);
  if (x_target < 0 || x_target > level + 1 || (x_target - x) % 2 != 0) return out;
  const std::int64_t N = level + 2;
  const std::int64_t J = (x_target - x) / 2;
  const std::int64_t Jp = (x + x_target) / 2 + 1;
  std::vector<i128> acc(out.size(), 0);
  auto add = [&](std::int64_t e, int sign) {
    for (std::int64_t D = std::max<std::int64_t>(e, 0); D <= max_depth; ++D) {
      acc[static_cast<std::size_t>(D)] += sign * static_cast<i128>(partition_count(D - e));
    }
  };
  for (int dir : {+1, -1}) {
    for (std::int64_t step = (dir > 0 ? 0 : 1);; ++step) {
      const std::int64_t k = dir * step;
      const std::int64_t e_plus = (J - k * N) * (J - k * N) + k * (x + 1) + k * k * N;
      const std::int64_t e_minus = (Jp + k * N) * (Jp + k * N) + k * (x + 1) + k * k * N;
      if (step > 2 && e_plus > max_depth && e_minus > max_depth) break;
      add(e_plus, +1);
      add(e_minus, -1);
    }
  }
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = narrow(acc[i], "branching_coefficients");
  return out;
}

void write_csv(std::ostream& os, const Decomposition& d) {
  os << "level,x,delta_depth,multiplicity\n";
  for (const auto& [beta, m] : d.entries) {
    os << beta.level << ',' << beta.alpha1_index << ',' << beta.delta_depth << ',' << m << '\n';
  }
}

}  // namespace sl2hat
