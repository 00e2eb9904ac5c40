#include "sl2hat/diffusion.hpp"

#include <cmath>
#include <iomanip>
#include <stdexcept>

#include "sl2hat/compensated.hpp"
#include "sl2hat/theta_harmonic.hpp"
#include "sl2hat/theta_series.hpp"

namespace sl2hat {

namespace {

constexpr double kPi = 3.14159265358979323846;

void check_run(double x, const DomainSpec& spec, double T, double dt) {
  validate(spec);
  if (!(x > 0 && x < spec.u)) throw std::domain_error("diffusion: start x must lie in (0, u)");
  if (!(T > 0)) throw std::domain_error("diffusion: horizon T must be positive");
  if (!(dt > 0) || dt > T) throw std::domain_error("diffusion: need 0 < dt <= T");
}

bool inside(double x, double s, const DomainSpec& spec) { return x > 0 && x < spec.upper(s); }

// Euler step from (x, s) over h with Brownian increment dw; refined by
// Brownian-bridge bisection while the proposal leaves the domain.
class GuardedStepper {
 public:
  GuardedStepper(const DomainSpec& spec, Rng& bridge) : spec_(spec), bridge_(bridge) {}

  double advance(double x, double s, double h, double dw, int depth = 0) {
    const double proposal = x + conditioned_drift(x, s, spec_) * h + dw;
    if (inside(proposal, s + h, spec_)) return proposal;
    if (depth >= kMaxHalvings) {
      flagged_ = true;
      return x;  // still inside: the upper boundary does not move down
    }
    const double mid = 0.5 * dw + std::sqrt(0.25 * h) * normal_(bridge_);
    const double x_mid = advance(x, s, 0.5 * h, mid, depth + 1);
    return advance(x_mid, s + 0.5 * h, 0.5 * h, dw - mid, depth + 1);
  }

  bool flagged() const { return flagged_; }

 private:
  const DomainSpec& spec_;
  Rng& bridge_;
  std::normal_distribution<double> normal_;
  bool flagged_ = false;
};

std::int64_t step_count(double T, double dt) {
  const auto n = static_cast<std::int64_t>(std::llround(T / dt));
  if (std::fabs(static_cast<double>(n) * dt - T) > 1e-9 * T) {
    throw std::domain_error("diffusion: T must be an integer multiple of dt");
  }
  return n;
}

constexpr std::uint64_t kBridgeStream = 0xb71d6e5a3c2f9401ULL;

}  // namespace

void validate(const DomainSpec& spec) {
  if (!(spec.u > 0)) throw std::domain_error("DomainSpec: u must be positive");
  if (!(spec.c > 0 && spec.c <= 1)) throw std::domain_error("DomainSpec: c must lie in (0, 1]");
}

double conditioned_drift(double x, double s, const DomainSpec& spec) {
  const double c = spec.c;
  const double clock = s + spec.u / c;
  return c * linear_theta_log_slope(c * x, c * c * clock);
}

double conditioned_harmonic(double x, double s, const DomainSpec& spec) {
  return phi0_scaled(spec.c, {x, s + spec.u / spec.c});
}

PathSample simulate_conditioned_path(double x, const DomainSpec& spec, double T, double dt, std::uint64_t seed) {
  check_run(x, spec, T, dt);
  const std::int64_t steps = step_count(T, dt);
  PathSample out;
  out.x0 = x;
  out.spec = spec;
  out.dt = dt;
  out.seed = seed;
  out.values.reserve(static_cast<std::size_t>(steps + 1));
  out.values.push_back(x);
  Rng rng(seed);
  Rng bridge(derive_seed(seed, kBridgeStream));
  std::normal_distribution<double> normal;
  GuardedStepper stepper(spec, bridge);
  const double sd = std::sqrt(dt);
  double cur = x;
  for (std::int64_t i = 0; i < steps; ++i) {
    cur = stepper.advance(cur, static_cast<double>(i) * dt, dt, sd * normal(rng));
    out.values.push_back(cur);
  }
  out.flagged = stepper.flagged();
  return out;
}

PathSample simulate_killed_reweighted(double x, const DomainSpec& spec, double T, double dt, std::uint64_t seed) {
  check_run(x, spec, T, dt);
  const std::int64_t steps = step_count(T, dt);
  PathSample out;
  out.x0 = x;
  out.spec = spec;
  out.dt = dt;
  out.seed = seed;
  out.values.reserve(static_cast<std::size_t>(steps + 1));
  out.values.push_back(x);
  Rng rng(seed);
  std::normal_distribution<double> normal;
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  const double sd = std::sqrt(dt);
  double cur = x;
  for (std::int64_t i = 0; i < steps && !out.absorbed; ++i) {
    const double s0 = static_cast<double>(i) * dt;
    const double next = cur + sd * normal(rng);
    const double u_draw = unif(rng);
    if (!inside(next, s0 + dt, spec)) {
      out.absorbed = true;
    } else {
      // Given both endpoints the path is a Brownian bridge; a bridge crosses a
      // line with endpoint gaps g0, g1 with probability exp(-2 g0 g1 / dt).
      const double p_low = std::exp(-2 * cur * next / dt);
      const double p_up = std::exp(-2 * (spec.upper(s0) - cur) * (spec.upper(s0 + dt) - next) / dt);
      if (u_draw < 1 - (1 - p_low) * (1 - p_up)) out.absorbed = true;
    }
    cur = next;
    out.values.push_back(cur);
  }
  out.weight = out.absorbed ? 0.0 : conditioned_harmonic(cur, T, spec) / conditioned_harmonic(x, 0, spec);
  return out;
}

TerminalEnsemble simulate_ensemble(Estimator est, double x, const DomainSpec& spec, double T, double dt,
                                   std::size_t paths, std::uint64_t seed, double checkpoint, unsigned workers) {
  check_run(x, spec, T, dt);
  if (paths == 0) throw std::invalid_argument("simulate_ensemble: need at least one path");
  const std::int64_t steps = step_count(T, dt);
  const std::int64_t check_index = checkpoint > 0 ? std::llround(checkpoint / dt) : -1;
  if (check_index > steps) throw std::domain_error("simulate_ensemble: checkpoint beyond horizon");
  TerminalEnsemble out;
  out.values.resize(paths);
  out.weights.resize(paths);
  if (check_index >= 0) out.checkpoint.resize(paths);
  std::vector<unsigned char> flagged(paths, 0);
  std::vector<unsigned char> absorbed(paths, 0);
  parallel_for_paths(
      paths,
      [&](std::size_t i) {
        const std::uint64_t s = derive_seed(seed, i);
        const PathSample p = est == Estimator::h_transform ? simulate_conditioned_path(x, spec, T, dt, s)
                                                           : simulate_killed_reweighted(x, spec, T, dt, s);
        out.values[i] = p.values.back();
        out.weights[i] = p.weight;
        flagged[i] = p.flagged;
        absorbed[i] = p.absorbed;
        if (check_index >= 0) {
          const auto j = std::min<std::size_t>(static_cast<std::size_t>(check_index), p.values.size() - 1);
          out.checkpoint[i] = p.values[j];
        }
      },
      workers);
  for (std::size_t i = 0; i < paths; ++i) {
    out.flagged += flagged[i];
    out.absorbed += absorbed[i];
  }
  return out;
}

std::vector<std::vector<double>> simulate_coupled_levels(double x, const DomainSpec& spec, double T, double dt0,
                                                         int levels, std::size_t paths, std::uint64_t seed,
                                                         unsigned workers) {
  if (levels < 1 || levels > 12) throw std::invalid_argument("simulate_coupled_levels: levels must lie in [1, 12]");
  check_run(x, spec, T, dt0);
  const std::int64_t coarse_steps = step_count(T, dt0);
  const std::int64_t ratio = std::int64_t{1} << (levels - 1);
  const std::int64_t fine_steps = coarse_steps * ratio;
  const double dt_fine = T / static_cast<double>(fine_steps);
  std::vector<std::vector<double>> out(static_cast<std::size_t>(levels), std::vector<double>(paths));
  parallel_for_paths(
      paths,
      [&](std::size_t i) {
        const std::uint64_t s = derive_seed(seed, i);
        Rng rng(s);
        std::normal_distribution<double> normal;
        std::vector<double> dw(static_cast<std::size_t>(fine_steps));
        const double sd = std::sqrt(dt_fine);
        for (auto& w : dw) w = sd * normal(rng);
        for (int l = 0; l < levels; ++l) {
          const std::int64_t group = ratio >> l;
          const double h = dt_fine * static_cast<double>(group);
          Rng bridge(derive_seed(s, kBridgeStream + static_cast<std::uint64_t>(l)));
          GuardedStepper stepper(spec, bridge);
          double cur = x;
          for (std::int64_t k = 0; k < fine_steps / group; ++k) {
            double inc = 0;
            for (std::int64_t j = 0; j < group; ++j) inc += dw[static_cast<std::size_t>(k * group + j)];
            cur = stepper.advance(cur, static_cast<double>(k) * h, h, inc);
          }
          out[static_cast<std::size_t>(l)][i] = cur;
        }
      },
      workers);
  return out;
}

MomentTarget moment_identity_target(double a, double x, double u, double t) {
  if (!(x > 0 && x < u)) throw std::domain_error("moment_identity_target: need 0 < x < u");
  if (t < 0) throw std::domain_error("moment_identity_target: t must be nonnegative");
  MomentTarget m{a, x, u, t, 0};
  m.value = phi_ratio(a, {x, u}) * std::exp(-a * a * t / 2);
  return m;
}

double killed_heat_kernel(double x, double y, double t, double u) {
  if (!(u > 0) || !(t > 0)) throw std::domain_error("killed_heat_kernel: need u > 0 and t > 0");
  if (!(x > 0 && x < u && y > 0 && y < u)) throw std::domain_error("killed_heat_kernel: x, y must lie in (0, u)");
  const long double rate = kPi * kPi * t / (2.0L * u * u);
  const auto K = static_cast<std::int64_t>(std::ceil(std::sqrt(std::log(1e14L) / rate))) + 2;
  CompensatedSum<long double> sum;
  for (std::int64_t k = 1; k <= K; ++k) {
    const long double kl = static_cast<long double>(k);
    sum += std::sin(kl * kPi * x / u) * std::sin(kl * kPi * y / u) * std::exp(-kl * kl * rate);
  }
  return static_cast<double>(2 * sum.value() / u);
}

double interval_conditioned_kernel(double x, double y, double t, double u) {
  const double p0 = killed_heat_kernel(x, y, t, u);
  return std::sin(kPi * y / u) / std::sin(kPi * x / u) * std::exp(kPi * kPi * t / (2 * u * u)) * p0;
}

IntervalLimitError interval_limit_error(double c, double x, double u, double t, int grid) {
  if (!(c > 0 && c < 1)) throw std::domain_error("interval_limit_error: c must lie in (0, 1)");
  if (!(x > 0 && x < u) || !(t > 0)) throw std::domain_error("interval_limit_error: need 0 < x < u, t > 0");
  if (grid < 2) throw std::invalid_argument("interval_limit_error: grid must be at least 2");
  // phi_0 itself underflows double once c u is small, so the ratio is formed in long double
  const long double cl = c;
  const long double base = phi0_ld(cl * x, cl * u);
  const long double late = cl * cl * (static_cast<long double>(t) + u / cl);
  const double growth = std::exp(kPi * kPi * t / (2 * u * u)) / std::sin(kPi * x / u);
  IntervalLimitError out;
  for (int i = 1; i < grid; ++i) {
    const double y = u * static_cast<double>(i) / grid;
    const auto ratio = static_cast<double>(phi0_ld(cl * y, late) / base);
    const double target = std::sin(kPi * y / u) * growth;
    out.sup_error = std::max(out.sup_error, std::fabs(ratio - target));
    out.target_sup = std::max(out.target_sup, std::fabs(target));
  }
  out.relative = out.sup_error / out.target_sup;
  return out;
}

MeanEstimate mean_and_error(const std::vector<double>& v) {
  if (v.empty()) throw std::invalid_argument("mean_and_error: empty sample");
  CompensatedSum<double> s;
  for (double x : v) s += x;
  const double mean = s.value() / static_cast<double>(v.size());
  CompensatedSum<double> q;
  for (double x : v) q += (x - mean) * (x - mean);
  const double n = static_cast<double>(v.size());
  const double var = v.size() > 1 ? q.value() / (n - 1) : 0.0;
  return {mean, std::sqrt(var / n)};
}

void write_moment_csv(std::ostream& os, const std::vector<MomentRow>& rows) {
  os << "estimator,a,t,estimate,std_error,target,z_score\n" << std::setprecision(17);
  for (const auto& r : rows) {
    os << r.estimator << ',' << r.a << ',' << r.t << ',' << r.estimate << ',' << r.std_error << ',' << r.target << ','
       << r.z_score << '\n';
  }
}

void write_path_csv(std::ostream& os, const std::vector<PathSample>& paths) {
  os << "path_id,step,time,position,weight\n" << std::setprecision(17);
  for (std::size_t p = 0; p < paths.size(); ++p) {
    for (std::size_t s = 0; s < paths[p].values.size(); ++s) {
      os << p << ',' << s << ',' << static_cast<double>(s) * paths[p].dt << ',' << paths[p].values[s] << ','
         << paths[p].weight << '\n';
    }
  }
}

}  // namespace sl2hat
