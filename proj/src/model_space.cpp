#include "torsion/model_space.hpp"

#include <cmath>
#include <string>

#include "torsion/quadrature.hpp"

namespace torsion {

namespace {
constexpr double kPi = 3.14159265358979323846;
}

ModelSpace::ModelSpace(int m, RadialFunction w, double r_max)
    : m_(m), w_(std::move(w)), r_max_(r_max) {
  if (m_ < 2) fail(ErrorCode::Admissibility, "model dimension must be >= 2");
  if (!(r_max_ > 0.0) || !std::isfinite(r_max_))
    fail(ErrorCode::Admissibility, "model r_max must be positive and finite");
  if (!w_.valid()) fail(ErrorCode::Admissibility, "model warping function missing");
  if (w_.r_max() < r_max_)
    fail(ErrorCode::Admissibility, "warping function domain smaller than r_max");

  const Jet2 at0 = w_.jet(0.0);
  if (std::abs(at0.v) > 1e-8)
    fail(ErrorCode::Admissibility, "warping function must satisfy w(0) = 0");
  if (std::abs(at0.d1 - 1.0) > 1e-8)
    fail(ErrorCode::Admissibility, "warping function must satisfy w'(0) = 1");
  w2_half_ = 0.5 * at0.d2;

  for (double r : Grid::geometric_nodes(r_max_, 64))
    if (!(w_.eval(r) > 0.0))
      fail(ErrorCode::Admissibility,
           "warping function must be positive on (0, r_max], fails near r=" +
               std::to_string(r));

  v0_ = 2.0 * std::pow(kPi, 0.5 * m_) / std::tgamma(0.5 * m_);
}

RadialFunction space_form_warping(double b) {
  if (b == 0.0) return RadialFunction::identity();
  if (b > 0.0) {
    const double sb = std::sqrt(b);
    return RadialFunction(
        [sb](double r) {
          const Jet2 x = sb * Jet2::variable(r);
          return (1.0 / sb) * sin(x);
        },
        kPi / sb);
  }
  const double sb = std::sqrt(-b);
  return RadialFunction([sb](double r) {
    const Jet2 x = sb * Jet2::variable(r);
    return (1.0 / sb) * sinh(x);
  });
}

ModelSpace ModelSpace::space_form(int m, double b, std::optional<double> r_max) {
  double cap = std::numeric_limits<double>::infinity();
  if (b > 0.0) cap = 0.999 * kPi / std::sqrt(b);
  double R = r_max.value_or(b > 0.0 ? cap : 10.0);
  if (R > cap)
    fail(ErrorCode::Admissibility,
         "space form radius exceeds the conjugate-point cap");
  return ModelSpace(m, space_form_warping(b), R);
}

void ModelSpace::check_radius(double r) const {
  if (r < 0.0 || r > r_max_ * (1.0 + 1e-12))
    fail(ErrorCode::OutOfDomain, "radius outside [0, r_max]");
}

double ModelSpace::w_pow_m1(double r) const {
  return std::pow(w_.eval(r), m_ - 1);
}

double ModelSpace::eta(double r) const {
  check_radius(r);
  if (r == 0.0) fail(ErrorCode::OutOfDomain, "eta diverges at r = 0");
  const Jet2 w = w_.jet(r);
  return w.d1 / w.v;
}

double ModelSpace::eta_deriv(double r) const {
  check_radius(r);
  if (r == 0.0) fail(ErrorCode::OutOfDomain, "eta' diverges at r = 0");
  const Jet2 w = w_.jet(r);
  const double e = w.d1 / w.v;
  return w.d2 / w.v - e * e;
}

double ModelSpace::sphere_volume(double r) const {
  check_radius(r);
  return v0_ * w_pow_m1(r);
}

double ModelSpace::ball_volume(double r) const {
  check_radius(r);
  if (r == 0.0) return 0.0;
  return v0_ * integrate([this](double t) { return w_pow_m1(t); }, 0.0, r,
                         quad_tol_);
}

double ModelSpace::isoperimetric_quotient(double r) const {
  check_radius(r);
  if (r == 0.0) return 0.0;
  const double r_series = 1e-7 * std::max(1.0, r_max_);
  if (r < r_series) {
    // q_w(r) = r/m (1 - (m-1) w''(0) r / (2(m+1))) + O(r^3); avoids the
    // absolute-error floor of the quadrature at tiny radii.
    return r / m_ * (1.0 - (m_ - 1) * w2_half_ * r / (m_ + 1));
  }
  const double num =
      integrate([this](double t) { return w_pow_m1(t); }, 0.0, r, quad_tol_);
  return num / w_pow_m1(r);
}

double ModelSpace::quotient_deriv(double r) const {
  check_radius(r);
  if (r == 0.0) return 1.0 / m_;
  return 1.0 - (m_ - 1) * eta(r) * isoperimetric_quotient(r);
}

double ModelSpace::mean_exit_time(double R, double r) const {
  check_radius(R);
  if (r < 0.0 || r > R * (1.0 + 1e-12))
    fail(ErrorCode::OutOfDomain, "mean_exit_time needs 0 <= r <= R");
  if (r >= R) return 0.0;
  return integrate([this](double t) { return isoperimetric_quotient(t); }, r,
                   R, quad_tol_);
}

TorsionalRigidity ModelSpace::torsional_rigidity(double R) const {
  check_radius(R);
  if (R == 0.0) return {0.0, 0.0};
  const double primary =
      v0_ * integrate(
                [this](double t) {
                  const double q = isoperimetric_quotient(t);
                  return q * q * w_pow_m1(t);
                },
                0.0, R, quad_tol_);
  const double cross =
      v0_ * integrate(
                [this, R](double r) {
                  return w_pow_m1(r) * mean_exit_time(R, r);
                },
                0.0, R, quad_tol_);
  const double scale = std::max({std::abs(primary), std::abs(cross), 1e-300});
  if (std::abs(primary - cross) > 1e-6 * scale)
    fail(ErrorCode::InternalMismatch,
         "torsional rigidity formulas disagree: " + std::to_string(primary) +
             " vs " + std::to_string(cross));
  return {primary, cross};
}

double ModelSpace::torsional_rigidity_derivative(double R) const {
  check_radius(R);
  if (R == 0.0) return 0.0;
  const double q = isoperimetric_quotient(R);
  return q * q * sphere_volume(R);
}

}  // namespace torsion
