#pragma once

#include <memory>
#include <utility>

#include "torsion/model_space.hpp"
#include "torsion/ode.hpp"

namespace torsion {

enum class Direction { Below, Above };

const char* direction_name(Direction d);

// The (m, w, g, h, R, direction) bundle describing a comparison
// constellation. g bounds the radial tangency from below, h the radial mean
// curvature; direction says which way the ambient curvature is bounded.
struct ConstellationSpec {
  int m = 2;
  RadialFunction w, g, h;
  double R = 1.0;
  Direction direction = Direction::Below;
};

// Throws Admissibility on a malformed spec: w must be a model warping on
// [0, R], g(0) = 1 with 0 < g <= 1, h finite on (0, R]; direction above
// forces g == 1.
void validate(const ConstellationSpec& spec);

// The reparametrization s(r) = int_0^r 1/g and its inverse.
class StretchMap {
 public:
  StretchMap() = default;

  double s(double r) const { return s_of_r_.eval(r); }
  double r(double s) const { return r_of_s_.eval(s); }
  double s_max() const { return s_of_r_.back(); }
  double r_max() const { return r_of_s_.back(); }

 private:
  friend StretchMap stretching(const RadialFunction& g, double R, double tol);
  OdeSolution s_of_r_, r_of_s_;
};

StretchMap stretching(const RadialFunction& g, double R, double tol = 1e-11);

struct BuildOptions {
  double ode_tol = 1e-10;
  double quad_tol = 1e-12;
  bool consistency_checks = true;
};

// The isoperimetric comparison space built from a constellation spec: the
// warping W(s) = Lambda^{1/(m-1)}(r(s)) where Lambda solves
//   d/dr {Lambda w g} = m (Lambda/g) (w' - h w)
// normalized so that W'(0) = 1. Immutable after build; queries are
// thread-safe.
class ComparisonSpace {
 public:
  static ComparisonSpace build(const ConstellationSpec& spec,
                               const BuildOptions& opts = {});

  const ConstellationSpec& spec() const { return spec_; }
  int dim() const { return spec_.m; }
  double r_max() const { return spec_.R; }
  double s_max() const { return s_max_; }

  double stretch(double r) const { return map_.s(r); }
  double radius(double s) const { return map_.r(s); }
  const StretchMap& stretch_map() const { return map_; }

  double lambda(double r) const;
  double lambda_log_deriv(double r) const;  // Lambda'/Lambda

  // W(s) and the full jet (value, dW/ds, d2W/ds2).
  double warping(double s) const { return warping_jet(s).v; }
  Jet2 warping_jet(double s) const;
  RadialFunction warping_function() const;

  // The comparison space viewed as the model space M^m_W. The returned
  // model computes its quantities through the generic quadrature path,
  // independent of the dense caches used here.
  ModelSpace as_model() const;

  // Isoperimetric quotient q_W(s), via the Lambda/g form. The s-form
  // int_0^s W^{m-1} / W^{m-1}(s) is available as an independent route.
  double quotient(double s) const;
  double quotient_s_form(double s) const;

  // Transplanted Dirichlet-Poisson solution on [0, R]:
  //   Gamma(r) = -q_W(s(r))/g(r),  psi(r) = int_r^R q_W(s(u))/g(u) du.
  double psi(double r) const;
  double gamma(double r) const;
  std::pair<RadialFunction, RadialFunction> transplanted_psi() const;

 private:
  double rhs_u(double r) const;           // d/dr log(Lambda w g) - m/r
  double u_value(double r) const;
  double phi(double r) const;             // int_0^r Lambda/g
  double psi_integrand(double r) const;   // q_W(s(r))/g(r)
  void run_consistency_checks() const;

  ConstellationSpec spec_;
  BuildOptions opts_;
  StretchMap map_;
  OdeSolution u_;    // log(Lambda w g) - m log r on [eps0, R]
  OdeSolution phi_;  // int_0^r Lambda/g on [r1, R]
  OdeSolution xi_;   // int_.^r q_W(s(u))/g(u) du on [r1, R]
  double eps0_ = 0.0, r1_ = 0.0;
  double s_max_ = 0.0;
  double psi_at_r1_ = 0.0;  // int_{r1}^{R} of the psi integrand
  double w2_s_ = 0.0;       // estimated W''(0) for the tiny-s jet
};

}  // namespace torsion
