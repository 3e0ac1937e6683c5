#pragma once

#include <filesystem>
#include <functional>
#include <memory>
#include <optional>

#include "torsion/comparison.hpp"
#include "torsion/model_space.hpp"

namespace torsion {

// Monotone non-increasing map t -> Vol{psi >= t} of a superlevel-set family,
// the symmetrization input. Either backed by a radial non-increasing psi on a
// model space (volumes evaluated exactly) or by a sampled two-column curve.
class VolumeProfile {
 public:
  // Superlevel volumes of a radial non-increasing psi on [0, R] over the
  // given source space: V(t) = scale * Vol_src(psi^{-1}(t)). The optional
  // scale emulates a source domain whose volume is a multiple of the model
  // ball family (useful for synthetic test profiles).
  static VolumeProfile from_radial(const RadialFunction& psi, double R,
                                   const ModelSpace& source,
                                   double scale = 1.0);

  // Sampled curve; t ascending, V non-increasing, V(last) == 0. Repeated t
  // values encode jumps (right-continuous: the last sample at a t wins).
  static VolumeProfile from_samples(std::vector<double> t,
                                    std::vector<double> V);

  // Two-column whitespace/comma separated text file (t, V).
  static VolumeProfile from_file(const std::filesystem::path& path);

  double t_max() const { return t_max_; }
  double total_volume() const { return value(0.0); }
  double value(double t) const;

  // dV/dt where available (radial-backed profiles only).
  std::optional<double> deriv(double t) const;

  bool radial_backed() const { return static_cast<bool>(value_fn_); }

 private:
  double t_max_ = 0.0;
  std::function<double(double)> value_fn_;            // radial-backed
  std::function<double(double)> deriv_fn_;
  std::vector<double> sample_t_, sample_v_;           // sampled
};

// The Schwarz symmetrization psi* of a profile into a target model space:
// a non-increasing radial function on [0, T_R] with
// ball_volume(target, r_tilde(t)) = V(t) and psi* the generalized inverse.
class SymmetrizedFunction {
 public:
  double symmetrized_radius() const { return T_R_; }  // T(R)
  double t_max() const { return t_max_; }

  double value(double rho) const;
  double deriv(double rho) const;

  Grid profile(int n = 257) const;  // (rho, psi*) samples

  const ModelSpace& target() const { return *target_; }

 private:
  friend SymmetrizedFunction symmetrize(const VolumeProfile&,
                                        const ModelSpace&, double);
  double T_R_ = 0.0;
  double t_max_ = 0.0;
  std::shared_ptr<const ModelSpace> target_;
  std::function<double(double)> value_fn_;
  std::function<double(double)> deriv_fn_;  // may be empty (sampled profiles)
};

// Radius T with ball_volume(target, T) = total_volume.
// Throws InsufficientRoom if the target model has too little volume.
double symmetrized_radius(const ModelSpace& target, double total_volume,
                          double tol = 1e-12);

SymmetrizedFunction symmetrize(const VolumeProfile& profile,
                               const ModelSpace& target, double tol = 1e-12);

struct IntegralIdentityReport {
  double lhs;            // integral of psi over the source, by layer cake
  double rhs;            // integral of psi* over the symmetrized ball
  double residual;       // |lhs - rhs|
  double equimeasurability_residual;  // max_t |V(t) - Vol{psi* >= t}|
};

IntegralIdentityReport verify_integral_identity(const VolumeProfile& profile,
                                                const SymmetrizedFunction& sym,
                                                int t_nodes = 256);

// Grid of E^{W'}_{T_R}(rho) - psi*'(rho) on (0, T_R); under a constellation
// bounded from below the margins are >= 0, bounded from above <= 0.
Grid derivative_comparison(const SymmetrizedFunction& sym, Direction direction,
                           int n = 128);

}  // namespace torsion
