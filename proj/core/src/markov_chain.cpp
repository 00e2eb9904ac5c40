#include "sl2hat/markov_chain.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <limits>
#include <mutex>
#include <stdexcept>
#include <string>

#include "sl2hat/compensated.hpp"
#include "sl2hat/partitions.hpp"
#include "sl2hat/tensor_decomp.hpp"
#include "sl2hat/theta_series.hpp"

namespace sl2hat {

namespace {

using cld = std::complex<long double>;

void require_state(const Weight& state, const char* who) {
  if (state.level < 1 || !is_dominant(state)) {
    throw std::invalid_argument(std::string(who) + ": state must be dominant of positive level, got " +
                                to_string(state));
  }
}

// Counter-based uniform in [0, 1) for (stream, step).
double counter_uniform(std::uint64_t stream, std::uint64_t step) {
  return static_cast<double>(derive_seed(stream, step) >> 11) * 0x1.0p-53;
}

std::size_t pick(const std::vector<double>& cdf, double u) {
  const auto it = std::upper_bound(cdf.begin(), cdf.end(), u * cdf.back());
  return std::min<std::size_t>(static_cast<std::size_t>(it - cdf.begin()), cdf.size() - 1);
}

std::vector<double> cumulative(const std::vector<double>& p) {
  std::vector<double> c(p.size());
  double acc = 0;
  for (std::size_t i = 0; i < p.size(); ++i) c[i] = (acc += p[i]);
  return c;
}

}  // namespace

void validate(const TiltVector& tilt) {
  if (!std::isfinite(tilt.h1) || !std::isfinite(tilt.h2) || !(tilt.h2 > 0)) {
    throw std::domain_error("TiltVector: need finite h1 and h2 > 0");
  }
}

double StepDistribution::probability(std::int64_t k, std::int64_t s) const {
  if (k < k_min || k > k_max || s < 0 || s > s_cut) return 0;
  return k_prob[static_cast<std::size_t>(k - k_min)] * s_prob[static_cast<std::size_t>(s)];
}

double StepDistribution::k_mean() const {
  CompensatedSum<double> m;
  for (std::int64_t k = k_min; k <= k_max; ++k) m += static_cast<double>(k) * k_prob[static_cast<std::size_t>(k - k_min)];
  return m.value();
}

double StepDistribution::k_variance() const {
  const double mean = k_mean();
  CompensatedSum<double> v;
  for (std::int64_t k = k_min; k <= k_max; ++k) {
    const double d = static_cast<double>(k) - mean;
    v += d * d * k_prob[static_cast<std::size_t>(k - k_min)];
  }
  return v.value();
}

StepDistribution build_step_distribution(const TiltVector& tilt, double eps) {
  validate(tilt);
  if (!(eps > 0 && eps < 1)) throw std::invalid_argument("build_step_distribution: eps must lie in (0, 1)");
  StepDistribution d;
  d.tilt = tilt;
  const long double y = tilt.y();
  const long double h1 = tilt.h1;

  // g(k) ~ exp(k h1 - y k^2), centred at h1 / (2y)
  const long double centre = h1 / (2 * y);
  const long double half = std::sqrt(std::log(4 / static_cast<long double>(eps)) / y) + 2;
  d.k_min = static_cast<std::int64_t>(std::floor(centre - half));
  d.k_max = static_cast<std::int64_t>(std::ceil(centre + half));
  const long double peak = h1 * h1 / (4 * y);
  std::vector<long double> g;
  CompensatedSum<long double> g_sum;
  for (std::int64_t k = d.k_min; k <= d.k_max; ++k) {
    const long double kl = static_cast<long double>(k);
    g.push_back(std::exp(kl * h1 - y * kl * kl - peak));
    g_sum += g.back();
  }
  const long double g_full = lattice_theta(tilt.a(), y).real() * std::exp(-peak);
  const long double k_mass = g_sum.value() / g_full;
  for (long double v : g) d.k_prob.push_back(static_cast<double>(v / g_sum.value()));

  // r(s) = p(s) exp(-y s) / prod (1 - e^{-ym})^{-1}
  const long double log_norm = log_euler_factor(y);
  CompensatedSum<long double> r_sum;
  std::vector<long double> r;
  for (std::int64_t s = 0;; ++s) {
    if (s > kPartitionRealMax) {
      throw std::overflow_error("build_step_distribution: tilt too small for the partition table (h2 = " +
                                std::to_string(tilt.h2) + ")");
    }
    const long double v = partition_count_real(s) * std::exp(-y * static_cast<long double>(s) - log_norm);
    r.push_back(v);
    r_sum += v;
    if (r_sum.value() >= 1 - static_cast<long double>(eps) / 2) break;
  }
  d.s_cut = static_cast<std::int64_t>(r.size()) - 1;
  for (long double v : r) d.s_prob.push_back(static_cast<double>(v / r_sum.value()));

  d.defect = static_cast<double>(std::max<long double>(0, 1 - k_mass * r_sum.value()));
  d.k_cdf = cumulative(d.k_prob);
  d.s_cdf = cumulative(d.s_prob);
  return d;
}

Weight sample_walk_step(const StepDistribution& dist, Rng& rng) {
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  const std::int64_t k = dist.k_min + static_cast<std::int64_t>(pick(dist.k_cdf, unif(rng)));
  const std::int64_t s = static_cast<std::int64_t>(pick(dist.s_cdf, unif(rng)));
  return {1, 2 * k, -(k * k + s)};
}

TransitionRow transition_row(const Weight& state, const TiltVector& tilt, std::int64_t depth_cut,
                             const SeriesControl& ctrl, double max_defect) {
  require_state(state, "transition_row");
  validate(tilt);
  const cld a = tilt.a();
  const long double y = tilt.y();
  const Weight bar = project_bar(state);
  const cld ch_state = char_eval(bar, a, y, ctrl);
  const cld ch_basic = char_eval(kLambda0, a, y, ctrl);

  const Decomposition dec = decompose(state, depth_cut);
  TransitionRow row;
  row.state = state;
  std::map<std::int64_t, cld> ch_target;  // by alpha1 index, depth 0
  CompensatedSum<long double> total;
  for (const auto& [beta, m] : dec.entries) {
    auto it = ch_target.find(beta.alpha1_index);
    if (it == ch_target.end()) it = ch_target.emplace(beta.alpha1_index, char_eval(project_bar(beta), a, y, ctrl)).first;
    const long double shift = std::exp(static_cast<long double>(beta.delta_depth - state.delta_depth) * y);
    const long double p = static_cast<long double>(m) * shift * (it->second / (ch_state * ch_basic)).real();
    row.targets.push_back({beta, static_cast<double>(p), m});
    total += p;
  }
  row.raw_sum = static_cast<double>(total.value());
  row.defect = std::fabs(1 - row.raw_sum);
  if (row.defect > max_defect) {
    throw std::runtime_error("transition_row: defect " + std::to_string(row.defect) + " at " + to_string(state) +
                             " exceeds " + std::to_string(max_defect) + "; depth_cut " + std::to_string(depth_cut) +
                             " is too small for h2 = " + std::to_string(tilt.h2));
  }
  for (auto& t : row.targets) t.probability /= row.raw_sum;
  return row;
}

std::size_t RowCache::KeyHash::operator()(const Key& k) const noexcept {
  std::uint64_t b1 = 0;
  std::uint64_t b2 = 0;
  std::memcpy(&b1, &k.h1, sizeof b1);
  std::memcpy(&b2, &k.h2, sizeof b2);
  std::uint64_t h = derive_seed(static_cast<std::uint64_t>(k.level), static_cast<std::uint64_t>(k.x));
  h = derive_seed(h, b1);
  h = derive_seed(h, b2);
  return static_cast<std::size_t>(derive_seed(h, static_cast<std::uint64_t>(k.depth_cut)));
}

TransitionRow RowCache::get(const Weight& state, const TiltVector& tilt, std::int64_t depth_cut,
                            const SeriesControl& ctrl, double max_defect) {
  const Key key{state.level, state.alpha1_index, tilt.h1, tilt.h2, depth_cut};
  std::shared_ptr<const TransitionRow> base;
  {
    std::shared_lock lock(mutex_);
    if (auto it = rows_.find(key); it != rows_.end()) base = it->second;
  }
  if (!base) {
    auto fresh = std::make_shared<const TransitionRow>(
        transition_row(project_bar(state), tilt, depth_cut, ctrl, std::numeric_limits<double>::infinity()));
    std::unique_lock lock(mutex_);
    base = rows_.emplace(key, std::move(fresh)).first->second;
  }
  if (base->defect > max_defect) {
    // rethrow with the caller's threshold
    return transition_row(state, tilt, depth_cut, ctrl, max_defect);
  }
  TransitionRow row = *base;
  row.state = state;
  for (auto& t : row.targets) t.beta.delta_depth += state.delta_depth;
  return row;
}

std::size_t RowCache::size() const {
  std::shared_lock lock(mutex_);
  return rows_.size();
}

namespace {

struct LevelNumerators {
  std::vector<cld> source;  // level n, index 0..n
  std::vector<cld> target;  // level n+1, index 0..n+1
  cld theta;
};

LevelNumerators level_numerators(std::int64_t level, const TiltVector& tilt, const SeriesControl& ctrl) {
  LevelNumerators out;
  const long double y = tilt.y();
  const bool flat = tilt.h1 == 0;
  const cld a = tilt.a();
  auto num = [&](std::int64_t n, std::int64_t x) -> cld {
    return flat ? cld(weyl_numerator0(n, x, y, ctrl)) : weyl_numerator(n, x, a, y, ctrl);
  };
  for (std::int64_t x = 0; x <= level; ++x) out.source.push_back(num(level, x));
  for (std::int64_t x = 0; x <= level + 1; ++x) out.target.push_back(num(level + 1, x));
  out.theta = lattice_theta(flat ? cld(0) : a, y);
  return out;
}

ProjectedRow row_from(std::int64_t level, std::int64_t x, const TiltVector& tilt, const LevelNumerators& nums) {
  ProjectedRow row;
  row.level = level;
  row.x = x;
  const long double y = tilt.y();
  const cld base = nums.source[static_cast<std::size_t>(x)] * nums.theta;
  CompensatedSum<long double> total;
  std::vector<long double> raw;
  for (std::int64_t xt = x % 2; xt <= level + 1; xt += 2) {
    const long double c = branching_theta(level, x, xt, y);
    const long double p = (c * nums.target[static_cast<std::size_t>(xt)] / base).real();
    if (p < 0) throw std::logic_error("projected_row: negative transition probability");
    row.targets.push_back(xt);
    raw.push_back(p);
    total += p;
  }
  row.raw_sum = static_cast<double>(total.value());
  for (long double p : raw) row.probability.push_back(static_cast<double>(p / total.value()));
  return row;
}

}  // namespace

ProjectedRow projected_row(std::int64_t level, std::int64_t x, const TiltVector& tilt, const SeriesControl& ctrl) {
  require_state({level, x, 0}, "projected_row");
  validate(tilt);
  return row_from(level, x, tilt, level_numerators(level, tilt, ctrl));
}

LevelTable build_level_table(std::int64_t level, const TiltVector& tilt, const SeriesControl& ctrl) {
  require_state({level, 0, 0}, "build_level_table");
  validate(tilt);
  const LevelNumerators nums = level_numerators(level, tilt, ctrl);
  LevelTable table;
  table.level = level;
  table.rows.resize(static_cast<std::size_t>(level + 1));
  table.cdf.resize(table.rows.size());
  for (std::int64_t x = 0; x <= level; ++x) {
    const auto i = static_cast<std::size_t>(x);
    table.rows[i] = row_from(level, x, tilt, nums);
    table.cdf[i] = cumulative(table.rows[i].probability);
    table.max_row_error = std::max(table.max_row_error, std::fabs(table.rows[i].raw_sum - 1));
  }
  return table;
}

ChainPath sample_chain(const Weight& start, const TiltVector& tilt, std::int64_t steps, std::int64_t depth_cut,
                       std::uint64_t seed, RowCache* cache, const SeriesControl& ctrl) {
  require_state(start, "sample_chain");
  if (steps < 0) throw std::invalid_argument("sample_chain: negative step count");
  ChainPath path;
  path.tilt = tilt;
  path.seed = seed;
  path.states.push_back(start);
  Rng rng(seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  for (std::int64_t i = 0; i < steps; ++i) {
    const Weight& cur = path.states.back();
    const TransitionRow row = cache ? cache->get(cur, tilt, depth_cut, ctrl) : transition_row(cur, tilt, depth_cut, ctrl);
    path.defect_max = std::max(path.defect_max, row.defect);
    std::vector<double> p;
    p.reserve(row.targets.size());
    for (const auto& t : row.targets) p.push_back(t.probability);
    path.states.push_back(row.targets[pick(cumulative(p), unif(rng))].beta);
  }
  return path;
}

ChainPath sample_projected_chain(const Weight& start, const TiltVector& tilt, std::int64_t steps, std::uint64_t seed,
                                 const SeriesControl& ctrl) {
  require_state(start, "sample_projected_chain");
  if (steps < 0) throw std::invalid_argument("sample_projected_chain: negative step count");
  ChainPath path;
  path.tilt = tilt;
  path.seed = seed;
  path.states.push_back(project_bar(start));
  for (std::int64_t i = 0; i < steps; ++i) {
    const Weight cur = path.states.back();
    const ProjectedRow row = projected_row(cur.level, cur.alpha1_index, tilt, ctrl);
    path.defect_max = std::max(path.defect_max, std::fabs(row.raw_sum - 1));
    const std::size_t j = pick(cumulative(row.probability), counter_uniform(seed, static_cast<std::uint64_t>(i)));
    path.states.push_back({cur.level + 1, row.targets[j], 0});
  }
  return path;
}

std::vector<double> scaled_chain_marginal(std::int64_t n, double t, double x, double u, std::size_t paths,
                                          std::uint64_t seed, unsigned workers) {
  if (n < 10) throw std::invalid_argument("scaled_chain_marginal: n must be at least 10");
  if (!(0 < x && x < u) || !(t > 0)) throw std::domain_error("scaled_chain_marginal: need 0 < x < u and t > 0");
  const double nd = static_cast<double>(n);
  const auto level0 = static_cast<std::int64_t>(std::floor(nd * u));
  const auto x0 = static_cast<std::int64_t>(std::floor(nd * x));
  const auto steps = static_cast<std::int64_t>(std::floor(nd * t));
  const TiltVector tilt = TiltVector::theorem(n);

  std::vector<std::int64_t> state(paths, x0);
  std::vector<std::uint64_t> streams(paths);
  for (std::size_t i = 0; i < paths; ++i) streams[i] = derive_seed(seed, i);
  for (std::int64_t step = 0; step < steps; ++step) {
    const LevelTable table = build_level_table(level0 + step, tilt);
    parallel_for_paths(
        paths,
        [&](std::size_t i) {
          const auto r = static_cast<std::size_t>(state[i]);
          const double uni = counter_uniform(streams[i], static_cast<std::uint64_t>(step));
          state[i] = table.rows[r].targets[pick(table.cdf[r], uni)];
        },
        workers);
  }
  std::vector<double> out(paths);
  for (std::size_t i = 0; i < paths; ++i) out[i] = static_cast<double>(state[i]) / nd;
  return out;
}

std::vector<long double> projected_chain_law(std::int64_t level0, std::int64_t x0, std::int64_t steps,
                                             const TiltVector& tilt, const SeriesControl& ctrl) {
  require_state({level0, x0, 0}, "projected_chain_law");
  if (steps < 0) throw std::invalid_argument("projected_chain_law: negative step count");
  std::vector<long double> law(static_cast<std::size_t>(level0 + 1), 0.0L);
  law[static_cast<std::size_t>(x0)] = 1;
  for (std::int64_t step = 0; step < steps; ++step) {
    const std::int64_t level = level0 + step;
    const LevelTable table = build_level_table(level, tilt, ctrl);
    std::vector<long double> next(static_cast<std::size_t>(level + 2), 0.0L);
    for (std::int64_t x = 0; x <= level; ++x) {
      const long double mass = law[static_cast<std::size_t>(x)];
      if (mass == 0) continue;
      const ProjectedRow& row = table.rows[static_cast<std::size_t>(x)];
      for (std::size_t j = 0; j < row.targets.size(); ++j) {
        next[static_cast<std::size_t>(row.targets[j])] += mass * row.probability[j];
      }
    }
    law = std::move(next);
  }
  return law;
}

void write_paths_csv(std::ostream& os, const std::vector<ChainPath>& paths) {
  os << "path_id,step,level,x,delta_depth\n";
  for (std::size_t p = 0; p < paths.size(); ++p) {
    for (std::size_t s = 0; s < paths[p].states.size(); ++s) {
      const Weight& w = paths[p].states[s];
      os << p << ',' << s << ',' << w.level << ',' << w.alpha1_index << ',' << w.delta_depth << '\n';
    }
  }
}

}  // namespace sl2hat
