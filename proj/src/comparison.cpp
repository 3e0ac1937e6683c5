#include "torsion/comparison.hpp"

#include <cmath>
#include <string>

#include "torsion/quadrature.hpp"

namespace torsion {

const char* direction_name(Direction d) {
  return d == Direction::Below ? "below" : "above";
}

void validate(const ConstellationSpec& spec) {
  if (spec.m < 2) fail(ErrorCode::Admissibility, "constellation needs m >= 2");
  if (!(spec.R > 0.0) || !std::isfinite(spec.R))
    fail(ErrorCode::Admissibility, "constellation needs finite R > 0");
  if (!spec.w.valid() || !spec.g.valid() || !spec.h.valid())
    fail(ErrorCode::Admissibility, "constellation needs w, g and h");

  // w is a model warping on [0, R].
  const Jet2 w0 = spec.w.jet(0.0);
  if (std::abs(w0.v) > 1e-8 || std::abs(w0.d1 - 1.0) > 1e-8)
    fail(ErrorCode::Admissibility, "w must satisfy w(0) = 0 and w'(0) = 1");

  const Jet2 g0 = spec.g.jet(0.0);
  if (std::abs(g0.v - 1.0) > 1e-8)
    fail(ErrorCode::Admissibility, "g must satisfy g(0) = 1");

  for (double r : Grid::geometric_nodes(spec.R, 64)) {
    if (!(spec.w.eval(r) > 0.0))
      fail(ErrorCode::Admissibility, "w must be positive on (0, R]");
    const double g = spec.g.eval(r);
    if (!(g > 0.0) || g > 1.0 + 1e-9)
      fail(ErrorCode::Admissibility, "g must satisfy 0 < g <= 1 on [0, R]");
    if (!std::isfinite(spec.h.eval(r)))
      fail(ErrorCode::Admissibility, "h must be finite on (0, R]");
    if (spec.direction == Direction::Above && std::abs(g - 1.0) > 1e-12)
      fail(ErrorCode::Admissibility,
           "direction=above requires g == 1 (comparison space C^m_{w,1,h})");
  }
}

StretchMap stretching(const RadialFunction& g, double R, double tol) {
  StretchMap map;
  IvpOptions opts;
  opts.tol = tol;
  map.s_of_r_ = solve_ivp_regularized(
      [&g](double r, double) { return 1.0 / g.eval(r); }, 0.0, 0.0, R, opts);
  const double s_end = map.s_of_r_.eval(R);
  map.r_of_s_ = solve_ivp_regularized(
      [&g, R](double, double r) { return g.eval(std::min(r, R)); }, 0.0, 0.0,
      s_end, opts);
  return map;
}

double ComparisonSpace::rhs_u(double r) const {
  const double g = spec_.g.eval(r);
  const Jet2 w = spec_.w.jet(r);
  const double eta = w.d1 / w.v;
  return spec_.m * ((eta - spec_.h.eval(r)) / (g * g) - 1.0 / r);
}

double ComparisonSpace::u_value(double r) const {
  if (r >= eps0_) return u_.eval(r);
  return u_.eval(eps0_) * (r / eps0_);
}

double ComparisonSpace::lambda(double r) const {
  if (r <= 0.0) return 0.0;
  const double u = u_value(r);
  return std::exp(u) * std::pow(r, spec_.m) /
         (spec_.w.eval(r) * spec_.g.eval(r));
}

double ComparisonSpace::lambda_log_deriv(double r) const {
  if (r <= 0.0) fail(ErrorCode::OutOfDomain, "Lambda'/Lambda diverges at 0");
  // m/r + u' - w'/w - g'/g; the m/r cancels against the drift term in u'.
  const Jet2 w = spec_.w.jet(r);
  const Jet2 g = spec_.g.jet(r);
  const double eta = w.d1 / w.v;
  return spec_.m * (eta - spec_.h.eval(r)) / (g.v * g.v) - eta - g.d1 / g.v;
}

double ComparisonSpace::phi(double r) const {
  if (r <= 0.0) return 0.0;
  if (r >= r1_) return phi_.eval(r);
  return integrate(
      [this](double t) { return lambda(t) / spec_.g.eval(t); }, 0.0, r,
      opts_.quad_tol);
}

double ComparisonSpace::quotient(double s) const {
  if (s < 0.0 || s > s_max_ * (1.0 + 1e-9))
    fail(ErrorCode::OutOfDomain, "quotient: s outside [0, s(R)]");
  if (s == 0.0) return 0.0;
  const double r = map_.r(std::min(s, s_max_));
  return phi(r) / lambda(r);
}

double ComparisonSpace::quotient_s_form(double s) const {
  if (s < 0.0 || s > s_max_ * (1.0 + 1e-9))
    fail(ErrorCode::OutOfDomain, "quotient: s outside [0, s(R)]");
  if (s == 0.0) return 0.0;
  const double num = integrate(
      [this](double t) { return lambda(map_.r(t)); }, 0.0, s, opts_.quad_tol);
  return num / lambda(map_.r(s));
}

double ComparisonSpace::psi_integrand(double r) const {
  return phi(r) / (lambda(r) * spec_.g.eval(r));
}

double ComparisonSpace::psi(double r) const {
  if (r < 0.0 || r > spec_.R * (1.0 + 1e-9))
    fail(ErrorCode::OutOfDomain, "psi: radius outside [0, R]");
  r = std::min(r, spec_.R);
  if (r >= r1_) return xi_.eval(spec_.R) - xi_.eval(r);
  return psi_at_r1_ + integrate([this](double t) { return psi_integrand(t); },
                                r, r1_, opts_.quad_tol);
}

double ComparisonSpace::gamma(double r) const {
  if (r < 0.0 || r > spec_.R * (1.0 + 1e-9))
    fail(ErrorCode::OutOfDomain, "gamma: radius outside [0, R]");
  if (r == 0.0) return 0.0;
  return -psi_integrand(std::min(r, spec_.R));
}

Jet2 ComparisonSpace::warping_jet(double s) const {
  if (s < 0.0 || s > s_max_ * (1.0 + 1e-9))
    fail(ErrorCode::OutOfDomain, "warping: s outside [0, s(R)]");
  if (s <= 1e-9 * s_max_) return {s, 1.0, w2_s_};
  s = std::min(s, s_max_);

  const double r = map_.r(s);
  const double p = 1.0 / (spec_.m - 1);
  const double W = std::pow(lambda(r), p);
  const double llog = lambda_log_deriv(r);

  // d/dr log Lambda and its derivative, both analytic in the jets of w, g, h.
  const Jet2 w = spec_.w.jet(r);
  const Jet2 g = spec_.g.jet(r);
  const Jet2 h = spec_.h.jet(r);
  const double eta = w.d1 / w.v;
  const double eta_d = w.d2 / w.v - eta * eta;
  const double gl = g.d1 / g.v;
  const double llog_d =
      spec_.m * ((eta_d - h.d1) / (g.v * g.v) -
                 2.0 * (eta - h.v) * g.d1 / (g.v * g.v * g.v)) -
      eta_d - (g.d2 / g.v - gl * gl);

  const double Wr = W * p * llog;                            // dW/dr
  const double Wrr = W * (p * llog_d + p * p * llog * llog); // d2W/dr2
  return {W, Wr * g.v, Wrr * g.v * g.v + Wr * g.d1 * g.v};
}

RadialFunction ComparisonSpace::warping_function() const {
  auto self = std::make_shared<ComparisonSpace>(*this);
  return RadialFunction([self](double s) { return self->warping_jet(s); },
                        s_max_);
}

ModelSpace ComparisonSpace::as_model() const {
  return ModelSpace(spec_.m, warping_function(), s_max_);
}

std::pair<RadialFunction, RadialFunction> ComparisonSpace::transplanted_psi()
    const {
  auto self = std::make_shared<ComparisonSpace>(*this);
  RadialFunction psi_fn(
      [self](double r) {
        const double value = self->psi(r);
        const double d1 = (r == 0.0) ? 0.0 : self->gamma(r);
        double d2;
        if (r == 0.0) {
          d2 = -1.0 / (self->spec_.m);
        } else {
          const double q_over_g = -d1;
          const double g = self->spec_.g.eval(r);
          const Jet2 gj = self->spec_.g.jet(r);
          d2 = -1.0 / (g * g) +
               q_over_g * (self->lambda_log_deriv(r) + gj.d1 / gj.v);
        }
        return Jet2{value, d1, d2};
      },
      spec_.R);
  RadialFunction gamma_fn(
      [self](double r) {
        const int m = self->spec_.m;
        if (r == 0.0) return Jet2{0.0, -1.0 / m, 0.0};
        const double value = self->gamma(r);
        const double q_over_g = -value;
        const Jet2 gj = self->spec_.g.jet(r);
        const double gl = gj.d1 / gj.v;
        const double llog = self->lambda_log_deriv(r);
        const double inv_g2 = 1.0 / (gj.v * gj.v);
        const double d1 = -inv_g2 + q_over_g * (llog + gl);
        // Gamma'' from differentiating once more; llog' as in warping_jet.
        const Jet2 w = self->spec_.w.jet(r);
        const Jet2 h = self->spec_.h.jet(r);
        const double eta = w.d1 / w.v;
        const double eta_d = w.d2 / w.v - eta * eta;
        const double llog_d =
            m * ((eta_d - h.d1) / (gj.v * gj.v) -
                 2.0 * (eta - h.v) * gj.d1 / (gj.v * gj.v * gj.v)) -
            eta_d - (gj.d2 / gj.v - gl * gl);
        const double gl_d = gj.d2 / gj.v - gl * gl;
        const double d2 = 2.0 * inv_g2 * gl - d1 * (llog + gl) +
                          q_over_g * (llog_d + gl_d);
        return Jet2{value, d1, d2};
      },
      spec_.R);
  return {psi_fn, gamma_fn};
}

ComparisonSpace ComparisonSpace::build(const ConstellationSpec& spec,
                                       const BuildOptions& opts) {
  validate(spec);

  ComparisonSpace C;
  C.spec_ = spec;
  C.opts_ = opts;
  C.map_ = stretching(spec.g, spec.R, opts.ode_tol);
  C.s_max_ = C.map_.s_max();
  C.eps0_ = 1e-8 * spec.R;
  C.r1_ = 1e-3 * spec.R;

  // The boundary condition W'(0) = 1 forces Lambda w g ~ r^m near the pole,
  // which requires r (eta_w - h) -> 1. A bounded h always satisfies this;
  // anything else makes the comparison space degenerate.
  for (double r : {C.eps0_, 1e1 * C.eps0_, 1e3 * C.eps0_}) {
    const Jet2 w = spec.w.jet(r);
    const double d = r * (w.d1 / w.v - spec.h.eval(r));
    if (!(d > 0.0))
      fail(ErrorCode::NonPositiveLambda,
           "eta_w - h is not positive near r = 0; the comparison space "
           "degenerates");
    if (r == C.eps0_ && std::abs(d - 1.0) > 0.01)
      fail(ErrorCode::NonPositiveLambda,
           "r*(eta_w - h) = " + std::to_string(d) +
               " near 0 (needs -> 1); W'(0) = 1 is unsatisfiable");
  }

  {
    IvpOptions uopts;
    uopts.tol = opts.ode_tol;
    uopts.overflow_guard = 500.0;  // log-space: e^500 is past any use
    const double u_start = C.eps0_ * C.rhs_u(0.5 * C.eps0_);
    C.u_ = solve_ivp_regularized(
        [&C](double r, double) { return C.rhs_u(r); }, C.eps0_, u_start,
        spec.R, uopts);
  }

  {
    IvpOptions iopts;
    iopts.tol = opts.ode_tol;
    const double phi_seed = integrate(
        [&C](double t) { return C.lambda(t) / C.spec_.g.eval(t); }, 0.0, C.r1_,
        opts.quad_tol);
    C.phi_ = solve_ivp_regularized(
        [&C](double r, double) { return C.lambda(r) / C.spec_.g.eval(r); },
        C.r1_, phi_seed, spec.R, iopts);

    const double xi_seed = integrate(
        [&C](double t) { return C.psi_integrand(t); }, 0.0, C.r1_,
        opts.quad_tol);
    C.xi_ = solve_ivp_regularized(
        [&C](double r, double) { return C.psi_integrand(r); }, C.r1_, xi_seed,
        spec.R, iopts);
    C.psi_at_r1_ = C.xi_.eval(spec.R) - C.xi_.eval(C.r1_);
  }

  {
    // W''(0) estimate for the tiny-s jet, from the log-derivative at a small
    // but safely representable radius.
    const double r = C.r1_;
    const double p = 1.0 / (spec.m - 1);
    const double s = C.map_.s(r);
    C.w2_s_ = 2.0 * (p * C.lambda_log_deriv(r) * spec.g.eval(r) - 1.0 / s);
  }

  if (opts.consistency_checks) C.run_consistency_checks();
  return C;
}

void ComparisonSpace::run_consistency_checks() const {
  // Boundary condition W'(0) = 1, via a Richardson quotient.
  const double d = 1e-6 * s_max_;
  const double w_prime0 = (4.0 * warping(d) - warping(2.0 * d)) / (2.0 * d);
  if (std::abs(w_prime0 - 1.0) > 1e-6)
    fail(ErrorCode::InternalMismatch,
         "built warping violates W'(0) = 1: got " + std::to_string(w_prime0));

  // The two forms of the isoperimetric quotient must agree.
  for (double frac : {1e-3, 1e-2, 0.1, 0.25, 0.5, 0.75, 1.0}) {
    const double s = frac * s_max_;
    const double q1 = quotient(s);
    const double q2 = quotient_s_form(s);
    if (std::abs(q1 - q2) > 1e-6 * std::max({std::abs(q1), std::abs(q2), 1e-12}))
      fail(ErrorCode::InternalMismatch,
           "q_W forms disagree at s = " + std::to_string(s) + ": " +
               std::to_string(q1) + " vs " + std::to_string(q2));
  }

  // Stretch map round trip.
  for (double frac : {0.1, 0.5, 1.0}) {
    const double s = frac * s_max_;
    if (std::abs(map_.s(map_.r(s)) - s) > 1e-8 * std::max(1.0, s_max_))
      fail(ErrorCode::InternalMismatch, "stretch map inversion drift");
  }
}

}  // namespace torsion
