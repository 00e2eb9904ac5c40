#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <random>

namespace sl2hat {

using Rng = std::mt19937_64;

/// splitmix64 finalizer applied to master ^ golden * (index + 1).
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index);

/// Worker count used by parallel_for_paths: SL2HAT_THREADS if set, else hardware concurrency.
unsigned default_workers();

/// Calls body(i) for i in [0, count) on `workers` threads (0 = default).
/// Each index runs exactly once; callers store results by index, so the
/// outcome never depends on scheduling.
void parallel_for_paths(std::size_t count, const std::function<void(std::size_t)>& body, unsigned workers = 0);

}  // namespace sl2hat
