#pragma once

// Multiplicities m_lambda(beta) of V(beta) in V(L0) (x) V(lambda).

#include <cstdint>
#include <map>
#include <ostream>
#include <vector>

#include "sl2hat/weights.hpp"

namespace sl2hat {

struct Decomposition {
  Weight source;
  std::map<Weight, std::int64_t> entries;  // dominant beta -> m_lambda(beta) > 0
  std::int64_t depth_cut = 0;              // relative to the depth of source + L0
};

/// Hard cap on the translation index scanned by branching_mult.
inline constexpr std::int64_t kWeylScanCap = 10'000;

/// sum over the affine Weyl group of det(w) mult_{L0}(beta + rho - w(lambda + rho)).
/// Throws std::invalid_argument if lambda is not dominant of positive level or
/// level(beta) != level(lambda) + 1; std::logic_error if the sum is negative.
std::int64_t branching_mult(const Weight& lambda, const Weight& beta);

/// All beta = lambda + mu with mu a weight of V(L0) at most depth_cut below
/// lambda + L0, filtered to dominant beta with nonzero multiplicity.
Decomposition decompose(const Weight& lambda, std::int64_t depth_cut);

/// Weight multiplicities of V(lambda) for weights at most `depth` below lambda,
/// by the Freudenthal recursion. Keys are full weights.
std::map<Weight, std::int64_t> freudenthal_multiplicities(const Weight& lambda, std::int64_t depth);

/// Independent decomposition: expand ch_{L0} ch_lambda as a formal series to
/// the given depth and peel off highest-weight characters one at a time.
/// Requires level(lambda) <= 6 and depth <= 10.
Decomposition char_product_oracle(const Weight& lambda, std::int64_t depth);

/// Projected branching series. For lambda = n L0 + (x/2) a1 and target index
/// x_target at level n+1, returns C(q) with
///   sum_D m_lambda(beta_0 - D delta) q^D = C(q) / prod_m (1 - q^m),
/// where beta_0 = (n+1) L0 + (x_target/2) a1 has delta depth 0 (the column
/// starts at D = ((x_target - x)/2)^2),
/// evaluated at q = exp(-y). Zero when x_target has the wrong parity or is out of range.
long double branching_theta(std::int64_t level, std::int64_t x, std::int64_t x_target, long double y);

/// Coefficients m_lambda(beta_0 - D delta) for D = 0..max_depth from the
/// partition-difference form of the same series (max_depth <= 416).
std::vector<std::int64_t> branching_coefficients(std::int64_t level, std::int64_t x, std::int64_t x_target,
                                                 std::int64_t max_depth);

/// CSV rows: level,x,delta_depth,multiplicity (with header).
void write_csv(std::ostream& os, const Decomposition& d);

}  // namespace sl2hat
