#include "sl2hat/partitions.hpp"

#include <cmath>
#include <mutex>
#include <numbers>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

namespace sl2hat {

namespace {

// Generalized pentagonal recurrence:
//   p(s) = sum_{j>=1} (-1)^{j+1} [p(s - j(3j-1)/2) + p(s - j(3j+1)/2)].
std::vector<std::uint64_t> pentagonal_table(std::int64_t size) {
  using Value = std::uint64_t;
  std::vector<Value> p(static_cast<std::size_t>(size + 1), Value{0});
  p[0] = 1;
  for (std::int64_t s = 1; s <= size; ++s) {
    Value plus{0};
    Value minus{0};
    for (std::int64_t j = 1;; ++j) {
      const std::int64_t g1 = j * (3 * j - 1) / 2;
      if (g1 > s) break;
      const std::int64_t g2 = j * (3 * j + 1) / 2;
      Value& acc = (j % 2 == 1) ? plus : minus;
      acc += p[static_cast<std::size_t>(s - g1)];
      if (g2 <= s) acc += p[static_cast<std::size_t>(s - g2)];
    }
    p[static_cast<std::size_t>(s)] = plus - minus;
  }
  return p;
}

// Beyond this the first Rademacher term alone is accurate to ~1e-25.
constexpr std::int64_t kCoinChangeMax = 2000;

// Plain coin-change sums: every update adds positive terms, so rounding stays
// at a few ulps. (The pentagonal recurrence is exact in modular integers but
// amplifies rounding without bound in floating point.)
std::vector<long double> coin_change_table(std::int64_t size) {
  std::vector<long double> p(static_cast<std::size_t>(size + 1), 0.0L);
  p[0] = 1;
  for (std::int64_t part = 1; part <= size; ++part) {
    for (std::int64_t s = part; s <= size; ++s) p[static_cast<std::size_t>(s)] += p[static_cast<std::size_t>(s - part)];
  }
  return p;
}

// Hardy-Ramanujan-Rademacher series truncated after a few terms.
long double rademacher(std::int64_t n) {
  const long double pi = std::numbers::pi_v<long double>;
  const long double lam = std::sqrt(static_cast<long double>(n) - 1.0L / 24);
  long double total = 0;
  for (std::int64_t k = 1; k <= 4; ++k) {
    long double a_k = 0;
    for (std::int64_t h = 0; h < k; ++h) {
      if (std::gcd(h, k) != 1) continue;
      long double dedekind = 0;
      for (std::int64_t r = 1; r < k; ++r) {
        dedekind += static_cast<long double>(r) / k * (static_cast<long double>((h * r) % k) / k - 0.5L);
      }
      const std::int64_t turn = (2 * (n % k) * h) % (2 * k);
      a_k += std::cos(pi * (dedekind - static_cast<long double>(turn) / k));
    }
    const long double c = pi / k * std::sqrt(2.0L / 3);
    const long double deriv = (c * lam * std::cosh(c * lam) - std::sinh(c * lam)) / (2 * lam * lam * lam);
    total += a_k * std::sqrt(static_cast<long double>(k)) * deriv;
  }
  return total / (pi * std::sqrt(2.0L));
}

const std::vector<std::uint64_t>& exact_table() {
  static std::once_flag once;
  static std::vector<std::uint64_t> table;
  std::call_once(once, [] { table = pentagonal_table(kPartitionExactMax); });
  return table;
}

const std::vector<long double>& real_table() {
  static std::once_flag once;
  static std::vector<long double> table;
  std::call_once(once, [] {
    table = coin_change_table(kCoinChangeMax);
    table.resize(static_cast<std::size_t>(kPartitionRealMax + 1));
    for (std::int64_t s = kCoinChangeMax + 1; s <= kPartitionRealMax; ++s) {
      table[static_cast<std::size_t>(s)] = rademacher(s);
    }
  });
  return table;
}

// s such that mu = L0 + k a1 - (k^2 + s) delta, or -1 when mu is not a weight of V(L0).
std::int64_t basic_depth(const Weight& mu) {
  if (mu.level != 1 || mu.alpha1_index % 2 != 0) return -1;
  const std::int64_t k = mu.alpha1_index / 2;
  const std::int64_t s = -mu.delta_depth - k * k;
  return s >= 0 ? s : -1;
}

}  // namespace

std::uint64_t partition_count(std::int64_t s) {
  if (s < 0) throw std::domain_error("partition_count: negative argument");
  if (s > kPartitionExactMax) {
    throw std::overflow_error("partition_count: p(" + std::to_string(s) + ") exceeds 64-bit range");
  }
  return exact_table()[static_cast<std::size_t>(s)];
}

long double partition_count_real(std::int64_t s) {
  if (s < 0) throw std::domain_error("partition_count_real: negative argument");
  if (s > kPartitionRealMax) {
    throw std::overflow_error("partition_count_real: argument beyond table size " +
                              std::to_string(kPartitionRealMax));
  }
  if (s <= kPartitionExactMax) return static_cast<long double>(exact_table()[static_cast<std::size_t>(s)]);
  return real_table()[static_cast<std::size_t>(s)];
}

std::uint64_t weight_mult_basic(const Weight& mu) {
  const std::int64_t s = basic_depth(mu);
  return s < 0 ? 0 : partition_count(s);
}

long double weight_mult_basic_real(const Weight& mu) {
  const std::int64_t s = basic_depth(mu);
  return s < 0 ? 0.0L : partition_count_real(s);
}

}  // namespace sl2hat
