#include "torsion/mc.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <thread>
#include <vector>

#include "torsion/errors.hpp"

namespace torsion {

namespace {

constexpr double kTwoPi = 6.283185307179586476925;
// Broadie-Glasserman-Kou continuity correction for discretely monitored
// barriers: the discrete barrier sits beta * sigma * sqrt(dt) inside.
constexpr double kBarrierShift = 0.5826;

inline std::uint64_t splitmix64(std::uint64_t& state) {
  state += 0x9e3779b97f4a7c15ULL;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Counter-based per-path stream: the state is derived from (seed, path), so
// path i draws the same numbers no matter which worker runs it.
struct PathRng {
  std::uint64_t state;
  bool has_spare = false;
  double spare = 0.0;

  PathRng(std::uint64_t seed, std::uint64_t path) {
    std::uint64_t s = seed ^ 0x6a09e667f3bcc909ULL;
    splitmix64(s);
    s ^= path * 0x9e3779b97f4a7c15ULL;
    splitmix64(s);
    state = s;
  }

  double uniform() {
    // 53-bit mantissa in (0, 1].
    return (static_cast<double>(splitmix64(state) >> 11) + 1.0) * 0x1.0p-53;
  }

  double normal() {
    if (has_spare) {
      has_spare = false;
      return spare;
    }
    const double u1 = uniform();
    const double u2 = uniform();
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = kTwoPi * u2;
    spare = radius * std::sin(angle);
    has_spare = true;
    return radius * std::cos(angle);
  }
};

// Deterministic pairwise sum over a fixed index order.
double pairwise_sum(const double* data, std::size_t n) {
  if (n <= 8) {
    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) sum += data[i];
    return sum;
  }
  const std::size_t half = n / 2;
  return pairwise_sum(data, half) + pairwise_sum(data + half, n - half);
}

// phi(r) = r * eta_w(r), tabulated on a uniform grid for the hot loop;
// smooth through the pole with phi(0) = 1.
struct DriftTable {
  double R;
  double inv_h;
  std::vector<double> phi;

  DriftTable(const ModelSpace& space, double R_, int n = 8192) : R(R_) {
    phi.resize(static_cast<std::size_t>(n) + 1);
    inv_h = n / R;
    phi[0] = 1.0;
    for (int i = 1; i <= n; ++i) {
      const double r = R * static_cast<double>(i) / n;
      phi[static_cast<std::size_t>(i)] = r * space.eta(r);
    }
  }

  double eta(double r) const {
    const double x = std::clamp(r * inv_h, 0.0, static_cast<double>(phi.size() - 1));
    const std::size_t i = std::min(static_cast<std::size_t>(x), phi.size() - 2);
    const double u = x - static_cast<double>(i);
    const double p = phi[i] + u * (phi[i + 1] - phi[i]);
    return p / r;
  }
};

struct SimParams {
  int m;
  double dt;
  double sqrt_2dt;
  double eps;
  double barrier;     // exit_radius shifted by the continuity correction
  double drift_cap;   // (m-1) eta(eps)
  long max_steps;
};

double run_one_path(const DriftTable& table, const SimParams& p,
                    double start, PathRng& rng) {
  double r = start;
  if (r >= p.barrier) return 0.0;
  for (long step = 1; step <= p.max_steps; ++step) {
    const double eta = (r <= p.eps) ? table.eta(p.eps) : table.eta(r);
    const double drift = std::min((p.m - 1) * eta, p.drift_cap);
    r += p.dt * drift + p.sqrt_2dt * rng.normal();
    if (r < p.eps) r = 2.0 * p.eps - r;  // reflect at the pole guard
    if (r >= p.barrier) return p.dt * static_cast<double>(step);
  }
  // Practically unreachable for sane configs; count the capped time.
  return p.dt * static_cast<double>(p.max_steps);
}

void validate_config(const ModelSpace& space, const McConfig& cfg) {
  if (cfg.paths < 1) fail(ErrorCode::DomainError, "mc: paths must be >= 1");
  if (!(cfg.dt > 0.0)) fail(ErrorCode::DomainError, "mc: dt must be > 0");
  if (cfg.start_radius < 0.0 || cfg.start_radius > cfg.exit_radius)
    fail(ErrorCode::DomainError, "mc: need 0 <= start_radius <= exit_radius");
  if (!(cfg.exit_radius > 0.0) ||
      cfg.exit_radius > space.r_max() * (1.0 + 1e-12))
    fail(ErrorCode::OutOfDomain, "mc: exit_radius outside (0, r_max]");
}

SimParams make_params(const ModelSpace& space, const DriftTable& table,
                      const McConfig& cfg) {
  SimParams p;
  p.m = space.dim();
  p.dt = cfg.dt;
  p.sqrt_2dt = std::sqrt(2.0 * cfg.dt);
  p.eps = cfg.pole_guard > 0.0 ? cfg.pole_guard : 1e-4 * cfg.exit_radius;
  if (p.eps >= cfg.exit_radius)
    fail(ErrorCode::DomainError, "mc: pole_guard must be << exit_radius");
  p.drift_cap = (p.m - 1) * table.eta(p.eps);
  if (cfg.dt * p.drift_cap > 0.1 * cfg.exit_radius)
    fail(ErrorCode::StepTooLarge,
         "dt * max drift = " + std::to_string(cfg.dt * p.drift_cap) +
             " exceeds 0.1 * R; shrink dt or raise pole_guard");
  p.barrier = cfg.exit_radius - kBarrierShift * p.sqrt_2dt;
  p.max_steps = static_cast<long>(1e9 / std::max<long>(cfg.paths, 1)) + 100000;
  return p;
}

McEstimate reduce(const std::vector<double>& values) {
  const std::size_t n = values.size();
  const double sum = pairwise_sum(values.data(), n);
  const double mean = sum / static_cast<double>(n);
  std::vector<double> sq(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double d = values[i] - mean;
    sq[i] = d * d;
  }
  const double ss = pairwise_sum(sq.data(), n);
  McEstimate est;
  est.mean = mean;
  est.paths_used = static_cast<long>(n);
  est.stderr_ =
      (n > 1) ? std::sqrt(ss / static_cast<double>(n - 1)) /
                    std::sqrt(static_cast<double>(n))
              : 0.0;
  return est;
}

template <typename PathFn>
std::vector<double> run_paths(long paths, int workers, const PathFn& fn) {
  std::vector<double> results(static_cast<std::size_t>(paths));
  const int nw = std::max(1, workers);
  if (nw == 1) {
    for (long i = 0; i < paths; ++i) results[static_cast<std::size_t>(i)] = fn(i);
    return results;
  }
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(nw));
  const long chunk = (paths + nw - 1) / nw;
  for (int t = 0; t < nw; ++t) {
    const long begin = t * chunk;
    const long end = std::min(paths, begin + chunk);
    if (begin >= end) break;
    pool.emplace_back([begin, end, &results, &fn]() {
      for (long i = begin; i < end; ++i)
        results[static_cast<std::size_t>(i)] = fn(i);
    });
  }
  for (auto& th : pool) th.join();
  return results;
}

}  // namespace

McEstimate simulate_exit_time(const ModelSpace& space, const McConfig& cfg) {
  validate_config(space, cfg);
  const DriftTable table(space, cfg.exit_radius);
  const SimParams p = make_params(space, table, cfg);

  auto one = [&](long i) {
    PathRng rng(cfg.seed, static_cast<std::uint64_t>(i));
    return run_one_path(table, p, cfg.start_radius, rng);
  };
  return reduce(run_paths(cfg.paths, cfg.workers, one));
}

McEstimate estimate_torsional_rigidity(const ModelSpace& space, double R,
                                       const McConfig& cfg) {
  McConfig local = cfg;
  local.exit_radius = R;
  validate_config(space, local);
  const DriftTable table(space, R);
  const SimParams p = make_params(space, table, local);

  // Stratified start radii: path k starts at the quantile midpoint
  // (k+1/2)/N of the measure V0 w^{m-1} dr, inverted through a cumulative
  // volume table.
  const int kGrid = 4096;
  std::vector<double> radii(kGrid + 1), cum(kGrid + 1);
  for (int i = 0; i <= kGrid; ++i)
    radii[static_cast<std::size_t>(i)] = R * static_cast<double>(i) / kGrid;
  cum[0] = 0.0;
  auto density = [&space](double r) {
    const double w = space.warping().eval(r);
    return std::pow(w, space.dim() - 1);
  };
  for (int i = 1; i <= kGrid; ++i) {
    const double a = radii[static_cast<std::size_t>(i - 1)];
    const double b = radii[static_cast<std::size_t>(i)];
    const double mid = 0.5 * (a + b);
    // Simpson panel per cell.
    cum[static_cast<std::size_t>(i)] =
        cum[static_cast<std::size_t>(i - 1)] +
        (b - a) / 6.0 * (density(a) + 4.0 * density(mid) + density(b));
  }
  const double total = cum.back();
  auto quantile = [&](double u) {
    const double target = u * total;
    auto it = std::lower_bound(cum.begin(), cum.end(), target);
    std::size_t hi = std::min<std::size_t>(
        static_cast<std::size_t>(it - cum.begin()), cum.size() - 1);
    if (hi == 0) hi = 1;
    const std::size_t lo = hi - 1;
    const double span = cum[hi] - cum[lo];
    const double frac = span > 0.0 ? (target - cum[lo]) / span : 0.5;
    return radii[lo] + frac * (radii[hi] - radii[lo]);
  };

  const double ball = space.ball_volume(R);
  auto one = [&](long i) {
    PathRng rng(cfg.seed, static_cast<std::uint64_t>(i));
    const double u = (static_cast<double>(i) + 0.5) / static_cast<double>(cfg.paths);
    const double start = quantile(u);
    return ball * run_one_path(table, p, start, rng);
  };
  return reduce(run_paths(cfg.paths, cfg.workers, one));
}

}  // namespace torsion
