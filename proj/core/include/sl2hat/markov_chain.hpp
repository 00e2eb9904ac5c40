#pragma once

// The random walk with increments distributed like the weights of V(L0)
// tilted by exp(<beta, h>), and the chain q(lambda, beta) on dominant weights
//   q(lambda, beta) = m_lambda(beta) ch_beta(h) / (ch_lambda(h) ch_L0(h)).
//
// Two row constructions are provided. transition_row enumerates full weights
// down to a finite delta depth. projected_row sums the delta depths in closed
// form: for lambda = n L0 + (x/2) a1 and target index x',
//   sum_D q(lambda, beta' - D delta) = C(q) N_{beta'}(h) / (N_lambda(h) Theta(h)),
// with C from tensor_decomp::branching_theta, N the Weyl numerators and
// Theta(h) = sum_k exp(<L0 + k a1 - k^2 delta, h>). Projected rows have no
// truncation, which matters for small tilts where the depth distribution of
// a single step spreads over thousands of levels.

#include <complex>
#include <cstdint>
#include <memory>
#include <ostream>
#include <shared_mutex>
#include <unordered_map>
#include <vector>

#include "sl2hat/characters.hpp"
#include "sl2hat/random.hpp"
#include "sl2hat/weights.hpp"

namespace sl2hat {

/// h = (h1 a1 + h2 L0) / 2.
struct TiltVector {
  double h1 = 0;
  double h2 = 1;

  /// The tilt (2/n) L0 used by the scaling limit.
  static TiltVector theorem(std::int64_t n) { return {0, 4.0 / static_cast<double>(n)}; }
  /// Coefficient y of L0 in h.
  long double y() const { return static_cast<long double>(h2) / 2; }
  /// Character argument a with h = i a a1 + y L0.
  std::complex<long double> a() const { return {0, -static_cast<long double>(h1) / 2}; }
};

/// Throws std::domain_error unless h2 > 0 and both components are finite.
void validate(const TiltVector& tilt);

inline constexpr double kMaxRowDefect = 1e-6;
inline constexpr std::int64_t kDefaultDepthCut = 12;

struct StepDistribution {
  TiltVector tilt;
  std::int64_t k_min = 0;
  std::int64_t k_max = 0;
  std::int64_t s_cut = 0;
  std::vector<double> k_prob;  // index k - k_min
  std::vector<double> k_cdf;
  std::vector<double> s_prob;  // index s
  std::vector<double> s_cdf;
  double defect = 0;  // mass outside the table before renormalization

  /// Normalized probability of L0 + k a1 - (k^2 + s) delta.
  double probability(std::int64_t k, std::int64_t s) const;
  double k_mean() const;
  double k_variance() const;
};

/// Factorized table p(k, s) = g(k) r(s), g(k) ~ exp(k h1 - y k^2), r(s) ~ p(s) exp(-y s),
/// with cuts chosen so the neglected mass is below eps.
StepDistribution build_step_distribution(const TiltVector& tilt, double eps = 1e-12);

/// Inverse-CDF draw of one increment.
Weight sample_walk_step(const StepDistribution& dist, Rng& rng);

struct RowTarget {
  Weight beta;
  double probability = 0;
  std::int64_t multiplicity = 0;
};

struct TransitionRow {
  Weight state;
  std::vector<RowTarget> targets;
  double raw_sum = 0;  // sum of probabilities before renormalization
  double defect = 0;   // |1 - raw_sum|
};

/// Depth-resolved row over decompose(state, depth_cut). Throws std::runtime_error
/// when the defect exceeds max_defect (pass infinity to inspect raw rows).
TransitionRow transition_row(const Weight& state, const TiltVector& tilt, std::int64_t depth_cut = kDefaultDepthCut,
                             const SeriesControl& ctrl = {}, double max_defect = kMaxRowDefect);

/// Memo for transition_row keyed by (level, x, tilt, depth_cut). Rows are stored
/// relative to a depth-0 state and shifted on lookup, so results match uncached calls exactly.
class RowCache {
 public:
  TransitionRow get(const Weight& state, const TiltVector& tilt, std::int64_t depth_cut, const SeriesControl& ctrl,
                    double max_defect = kMaxRowDefect);
  std::size_t size() const;

 private:
  struct Key {
    std::int64_t level;
    std::int64_t x;
    double h1;
    double h2;
    std::int64_t depth_cut;
    bool operator==(const Key&) const = default;
  };
  struct KeyHash {
    std::size_t operator()(const Key& k) const noexcept;
  };
  mutable std::shared_mutex mutex_;
  std::unordered_map<Key, std::shared_ptr<const TransitionRow>, KeyHash> rows_;
};

/// Row of the chain on projected states n L0 + (x/2) a1.
struct ProjectedRow {
  std::int64_t level = 0;
  std::int64_t x = 0;
  std::vector<std::int64_t> targets;  // alpha1 indices at level + 1
  std::vector<double> probability;
  double raw_sum = 0;
};

ProjectedRow projected_row(std::int64_t level, std::int64_t x, const TiltVector& tilt, const SeriesControl& ctrl = {});

/// Every projected row at one level, sharing the numerator evaluations.
struct LevelTable {
  std::int64_t level = 0;
  std::vector<ProjectedRow> rows;       // index x = 0..level
  std::vector<std::vector<double>> cdf; // cumulative probabilities per row
  double max_row_error = 0;             // max |raw_sum - 1|
};

LevelTable build_level_table(std::int64_t level, const TiltVector& tilt, const SeriesControl& ctrl = {});

struct ChainPath {
  std::vector<Weight> states;
  TiltVector tilt;
  std::uint64_t seed = 0;
  double defect_max = 0;
};

/// Full-weight chain sampled row by row from transition_row.
ChainPath sample_chain(const Weight& start, const TiltVector& tilt, std::int64_t steps, std::int64_t depth_cut,
                       std::uint64_t seed, RowCache* cache = nullptr, const SeriesControl& ctrl = {});

/// Chain on projected states; delta depths of the returned states are zero.
ChainPath sample_projected_chain(const Weight& start, const TiltVector& tilt, std::int64_t steps, std::uint64_t seed,
                                 const SeriesControl& ctrl = {});

/// Samples `paths` projected chains started at [nu] L0 + [xn] a1/2 with tilt (2/n) L0,
/// runs [nt] steps and returns alpha1_index / n at the end. Path i uses the
/// stream derive_seed(seed, i), so results do not depend on the worker count.
std::vector<double> scaled_chain_marginal(std::int64_t n, double t, double x, double u, std::size_t paths,
                                          std::uint64_t seed, unsigned workers = 0);

/// Exact law of alpha1_index after `steps` projected steps from (level0, x0):
/// entry i is the probability of index i at level level0 + steps.
std::vector<long double> projected_chain_law(std::int64_t level0, std::int64_t x0, std::int64_t steps,
                                             const TiltVector& tilt, const SeriesControl& ctrl = {});

/// CSV rows path_id,step,level,x,delta_depth with header.
void write_paths_csv(std::ostream& os, const std::vector<ChainPath>& paths);

}  // namespace sl2hat
