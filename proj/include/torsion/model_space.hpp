#pragma once

#include <optional>

#include "torsion/radial.hpp"

namespace torsion {

struct TorsionalRigidity {
  double value;        // from the q^2 integral
  double cross_check;  // from the double integral of the exit time
};

// Rotationally symmetric model space of dimension m with warping function w,
// w(0) = 0, w'(0) = 1, w > 0 on (0, r_max].
class ModelSpace {
 public:
  ModelSpace(int m, RadialFunction w, double r_max);

  // Space forms of constant curvature b; for b > 0 the radius is capped
  // strictly below the conjugate radius pi/sqrt(b).
  static ModelSpace space_form(int m, double b,
                               std::optional<double> r_max = {});

  int dim() const { return m_; }
  double r_max() const { return r_max_; }
  const RadialFunction& warping() const { return w_; }

  double unit_sphere_area() const { return v0_; }  // area of S^{m-1}

  double eta(double r) const;        // w'/w
  double eta_deriv(double r) const;  // d/dr (w'/w)

  double sphere_volume(double r) const;  // V0 * w^{m-1}(r)
  double ball_volume(double r) const;    // V0 * int_0^r w^{m-1}

  double isoperimetric_quotient(double r) const;  // q_w
  double quotient_deriv(double r) const;          // q_w' = 1 - (m-1) eta q

  double mean_exit_time(double R, double r) const;  // int_r^R q_w

  // Returns both evaluations; throws InternalMismatch if they disagree
  // beyond 1e-6 relative.
  TorsionalRigidity torsional_rigidity(double R) const;
  double torsional_rigidity_derivative(double R) const;  // q^2(R) Vol(S_R)

  double quad_tol() const { return quad_tol_; }

 private:
  void check_radius(double r) const;
  double w_pow_m1(double r) const;  // w^{m-1}

  int m_;
  RadialFunction w_;
  double r_max_;
  double v0_;
  double w2_half_;  // w''(0)/2, for the small-r series of q_w
  double quad_tol_ = 1e-12;
};

// The warping function Q_b of the simply connected space form of curvature b.
RadialFunction space_form_warping(double b);

// eta_w = w'/w as a standalone evaluable object.
class EtaFunction {
 public:
  explicit EtaFunction(const ModelSpace& space) : space_(&space) {}
  double operator()(double r) const { return space_->eta(r); }
  double deriv(double r) const { return space_->eta_deriv(r); }

 private:
  const ModelSpace* space_;
};

}  // namespace torsion
