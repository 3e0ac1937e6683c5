#include "torsion/symmetrize.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <string>

#include "torsion/quadrature.hpp"
#include "torsion/roots.hpp"

namespace torsion {

VolumeProfile VolumeProfile::from_radial(const RadialFunction& psi, double R,
                                         const ModelSpace& source,
                                         double scale) {
  if (!(R > 0.0) || R > source.r_max() * (1.0 + 1e-12))
    fail(ErrorCode::OutOfDomain, "profile radius outside source domain");
  if (!(scale > 0.0)) fail(ErrorCode::DomainError, "profile scale must be > 0");
  const double top = psi.eval(0.0);
  const double bottom = psi.eval(R);
  if (std::abs(bottom) > 1e-9 * std::max(1.0, top))
    fail(ErrorCode::Admissibility, "radial profile needs psi(R) = 0");
  if (!(top > 0.0))
    fail(ErrorCode::Admissibility, "radial profile needs psi(0) > 0");

  auto src = std::make_shared<ModelSpace>(source);
  auto psi_fn = psi;
  const double bottom_clip = std::max(bottom, 0.0);

  VolumeProfile profile;
  profile.t_max_ = top;
  auto level_radius = [psi_fn, R, top, bottom_clip](double t) {
    if (t <= bottom_clip) return R;
    return invert_monotone(psi_fn, t, 0.0, R, 1e-13 * std::max(1.0, top));
  };
  profile.value_fn_ = [level_radius, src, scale, top](double t) {
    if (t >= top) return 0.0;
    return scale * src->ball_volume(level_radius(std::max(t, 0.0)));
  };
  profile.deriv_fn_ = [level_radius, psi_fn, src, scale, top](double t) {
    if (t >= top) return 0.0;
    const double a = level_radius(std::max(t, 0.0));
    const double dpsi = psi_fn.deriv(a);
    if (dpsi == 0.0) return 0.0;
    return scale * src->sphere_volume(a) / dpsi;  // dpsi < 0 so V' < 0
  };
  return profile;
}

VolumeProfile VolumeProfile::from_samples(std::vector<double> t,
                                          std::vector<double> V) {
  if (t.size() != V.size() || t.size() < 2)
    fail(ErrorCode::Admissibility, "profile needs >= 2 aligned samples");
  for (std::size_t i = 1; i < t.size(); ++i) {
    if (t[i] < t[i - 1])
      fail(ErrorCode::Admissibility, "profile t samples must be ascending");
    if (V[i] > V[i - 1] + 1e-12 * std::max(1.0, V.front()))
      fail(ErrorCode::Admissibility, "profile volumes must be non-increasing");
  }
  if (std::abs(V.back()) > 1e-12 * std::max(1.0, V.front()))
    fail(ErrorCode::Admissibility, "profile must end at V(t_max) = 0");

  VolumeProfile profile;
  profile.t_max_ = t.back();
  profile.sample_t_ = std::move(t);
  profile.sample_v_ = std::move(V);
  return profile;
}

VolumeProfile VolumeProfile::from_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::ConfigError, "cannot open profile file " + path.string());
  std::vector<double> t, V;
  std::string line;
  while (std::getline(in, line)) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    for (char& c : line)
      if (c == ',') c = ' ';
    std::istringstream row(line);
    double a, b;
    if (row >> a >> b) {
      t.push_back(a);
      V.push_back(b);
    }
  }
  return from_samples(std::move(t), std::move(V));
}

double VolumeProfile::value(double t) const {
  if (value_fn_) return value_fn_(std::clamp(t, 0.0, t_max_));
  t = std::clamp(t, sample_t_.front(), sample_t_.back());
  // Right-continuous: at a repeated t the last sample wins.
  auto it = std::upper_bound(sample_t_.begin(), sample_t_.end(), t);
  const std::size_t hi = std::min<std::size_t>(
      static_cast<std::size_t>(it - sample_t_.begin()), sample_t_.size() - 1);
  if (hi == 0) return sample_v_.front();
  const std::size_t lo = hi - 1;
  if (sample_t_[hi] == sample_t_[lo])
    return sample_v_[hi];
  if (t == sample_t_[lo]) {
    // Take the last sample with this exact t.
    std::size_t k = lo;
    while (k + 1 < sample_t_.size() && sample_t_[k + 1] == t) ++k;
    if (k != lo) return sample_v_[k];
  }
  const double u = (t - sample_t_[lo]) / (sample_t_[hi] - sample_t_[lo]);
  return sample_v_[lo] + u * (sample_v_[hi] - sample_v_[lo]);
}

std::optional<double> VolumeProfile::deriv(double t) const {
  if (deriv_fn_) return deriv_fn_(t);
  return std::nullopt;
}

double symmetrized_radius(const ModelSpace& target, double total_volume,
                          double tol) {
  if (total_volume < 0.0)
    fail(ErrorCode::DomainError, "symmetrized_radius: negative volume");
  if (total_volume == 0.0) return 0.0;
  const double cap = target.ball_volume(target.r_max());
  if (total_volume > cap * (1.0 + 1e-12))
    fail(ErrorCode::InsufficientRoom,
         "target model holds volume " + std::to_string(cap) +
             " < requested " + std::to_string(total_volume));
  return invert_monotone(
      [&target](double r) { return target.ball_volume(r); }, total_volume, 0.0,
      target.r_max(), tol * std::max(1.0, total_volume));
}

SymmetrizedFunction symmetrize(const VolumeProfile& profile,
                               const ModelSpace& target, double tol) {
  SymmetrizedFunction sym;
  sym.t_max_ = profile.t_max();
  sym.target_ = std::make_shared<ModelSpace>(target);
  sym.T_R_ = symmetrized_radius(target, profile.total_volume(), tol);

  auto tgt = sym.target_;
  auto prof = std::make_shared<VolumeProfile>(profile);
  const double T_R = sym.T_R_;
  const double t_max = sym.t_max_;

  // psi*(rho) = sup{ t : r_tilde(t) >= rho } with
  // ball_volume(target, r_tilde(t)) = V(t); plateaus resolve by the
  // left-continuous generalized inverse.
  sym.value_fn_ = [prof, tgt, T_R, t_max](double rho) {
    rho = std::clamp(rho, 0.0, T_R);
    if (rho >= T_R) {
      // t with V(t) = ball(T_R) could be a plateau at t = 0; sup semantics.
      const double vol = tgt->ball_volume(T_R);
      double lo = 0.0, hi = t_max;
      for (int iter = 0; iter < 100; ++iter) {
        const double mid = 0.5 * (lo + hi);
        if (prof->value(mid) >= vol * (1.0 - 1e-14))
          lo = mid;
        else
          hi = mid;
      }
      return lo;
    }
    const double vol = tgt->ball_volume(rho);
    // Largest t with V(t) >= vol (V non-increasing).
    double lo = 0.0, hi = t_max;
    if (prof->value(t_max) >= vol) return t_max;
    for (int iter = 0; iter < 100; ++iter) {
      const double mid = 0.5 * (lo + hi);
      if (prof->value(mid) >= vol)
        lo = mid;
      else
        hi = mid;
    }
    return lo;
  };

  if (profile.radial_backed()) {
    auto value_fn = sym.value_fn_;
    sym.deriv_fn_ = [prof, tgt, value_fn](double rho) {
      const double t = value_fn(rho);
      const auto dV = prof->deriv(t);
      if (!dV || *dV == 0.0) return 0.0;
      // r_tilde'(t) = V'(t) / Vol(S_{r_tilde(t)}); psi*' = 1 / r_tilde'.
      return tgt->sphere_volume(rho) / *dV;
    };
  }
  return sym;
}

double SymmetrizedFunction::value(double rho) const { return value_fn_(rho); }

double SymmetrizedFunction::deriv(double rho) const {
  if (deriv_fn_) return deriv_fn_(rho);
  const double d = 1e-5 * T_R_;
  const double lo = std::max(0.0, rho - d);
  const double hi = std::min(T_R_, rho + d);
  return (value_fn_(hi) - value_fn_(lo)) / (hi - lo);
}

Grid SymmetrizedFunction::profile(int n) const {
  Grid g;
  g.nodes = Grid::uniform_nodes(0.0, T_R_, n);
  g.values.reserve(g.nodes.size());
  for (double rho : g.nodes) g.values.push_back(value(rho));
  return g;
}

IntegralIdentityReport verify_integral_identity(const VolumeProfile& profile,
                                                const SymmetrizedFunction& sym,
                                                int t_nodes) {
  IntegralIdentityReport report{};
  // Layer cake: integral of psi over the source equals int_0^{t_max} V(t) dt.
  report.lhs = integrate([&profile](double t) { return profile.value(t); },
                         0.0, profile.t_max(), 1e-10);
  const ModelSpace& target = sym.target();
  report.rhs = integrate(
      [&sym, &target](double rho) {
        return sym.value(rho) * target.sphere_volume(rho);
      },
      0.0, sym.symmetrized_radius(), 1e-10);
  report.residual = std::abs(report.lhs - report.rhs);

  // Equimeasurability: recover the superlevel radius of psi* by monotone
  // scan + bisection, then compare ball volumes against V(t).
  const double T_R = sym.symmetrized_radius();
  double max_resid = 0.0;
  for (int i = 1; i < t_nodes; ++i) {
    const double t =
        profile.t_max() * static_cast<double>(i) / t_nodes;
    double lo = 0.0, hi = T_R;
    if (sym.value(T_R) >= t) {
      lo = T_R;
    } else {
      for (int iter = 0; iter < 80; ++iter) {
        const double mid = 0.5 * (lo + hi);
        if (sym.value(mid) >= t)
          lo = mid;
        else
          hi = mid;
      }
    }
    const double vol_star = target.ball_volume(lo);
    max_resid = std::max(max_resid, std::abs(profile.value(t) - vol_star));
  }
  report.equimeasurability_residual = max_resid;
  return report;
}

Grid derivative_comparison(const SymmetrizedFunction& sym, Direction direction,
                           int n) {
  (void)direction;  // the sign convention of the margin carries the direction
  const double T_R = sym.symmetrized_radius();
  const ModelSpace& target = sym.target();
  Grid g;
  g.nodes = Grid::uniform_nodes(T_R / n, T_R * (1.0 - 1e-9), n);
  g.values.reserve(g.nodes.size());
  for (double rho : g.nodes) {
    const double exit_deriv = -target.isoperimetric_quotient(rho);
    g.values.push_back(exit_deriv - sym.deriv(rho));
  }
  return g;
}

}  // namespace torsion
