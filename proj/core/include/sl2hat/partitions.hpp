#pragma once

#include <cstdint>

#include "sl2hat/weights.hpp"

namespace sl2hat {

/// Largest s whose partition number fits in 64 bits.
inline constexpr std::int64_t kPartitionExactMax = 416;
/// Size of the floating-point partition table.
inline constexpr std::int64_t kPartitionRealMax = 200'000;

/// p(s) by Euler's pentagonal recurrence over a memoized table.
/// Throws std::domain_error for s < 0 and std::overflow_error for s > kPartitionExactMax.
std::uint64_t partition_count(std::int64_t s);

/// p(s) in long double, valid for 0 <= s <= kPartitionRealMax: exact below 417,
/// coin-change sums up to 2000, the Rademacher series beyond.
long double partition_count_real(std::int64_t s);

/// Multiplicity of mu in the basic representation V(L0): p(s) when
/// mu = L0 + k a1 - (k^2 + s) delta with s >= 0, and 0 otherwise.
std::uint64_t weight_mult_basic(const Weight& mu);

/// Same as weight_mult_basic but as a long double, usable far beyond 64-bit range.
long double weight_mult_basic_real(const Weight& mu);

}  // namespace sl2hat
