#include "torsion/ode.hpp"

#include <algorithm>
#include <cmath>

#include "torsion/errors.hpp"

namespace torsion {

namespace {

// Dormand-Prince 5(4) tableau.
constexpr double a21 = 1.0 / 5.0;
constexpr double a31 = 3.0 / 40.0, a32 = 9.0 / 40.0;
constexpr double a41 = 44.0 / 45.0, a42 = -56.0 / 15.0, a43 = 32.0 / 9.0;
constexpr double a51 = 19372.0 / 6561.0, a52 = -25360.0 / 2187.0,
                 a53 = 64448.0 / 6561.0, a54 = -212.0 / 729.0;
constexpr double a61 = 9017.0 / 3168.0, a62 = -355.0 / 33.0,
                 a63 = 46732.0 / 5247.0, a64 = 49.0 / 176.0,
                 a65 = -5103.0 / 18656.0;
constexpr double b1 = 35.0 / 384.0, b3 = 500.0 / 1113.0, b4 = 125.0 / 192.0,
                 b5 = -2187.0 / 6784.0, b6 = 11.0 / 84.0;
constexpr double e1 = b1 - 5179.0 / 57600.0, e3 = b3 - 7571.0 / 16695.0,
                 e4 = b4 - 393.0 / 640.0, e5 = b5 + 92097.0 / 339200.0,
                 e6 = b6 - 187.0 / 2100.0, e7 = -1.0 / 40.0;

double hermite(double t, double h, double y0, double f0, double y1, double f1) {
  const double t2 = t * t, t3 = t2 * t;
  return (2.0 * t3 - 3.0 * t2 + 1.0) * y0 + (t3 - 2.0 * t2 + t) * h * f0 +
         (-2.0 * t3 + 3.0 * t2) * y1 + (t3 - t2) * h * f1;
}

double hermite_d(double t, double h, double y0, double f0, double y1,
                 double f1) {
  const double t2 = t * t;
  return ((6.0 * t2 - 6.0 * t) * y0 + (3.0 * t2 - 4.0 * t + 1.0) * h * f0 +
          (-6.0 * t2 + 6.0 * t) * y1 + (3.0 * t2 - 2.0 * t) * h * f1) / h;
}

double hermite_dd(double t, double h, double y0, double f0, double y1,
                  double f1) {
  return ((12.0 * t - 6.0) * y0 + (6.0 * t - 4.0) * h * f0 +
          (-12.0 * t + 6.0) * y1 + (6.0 * t - 2.0) * h * f1) / (h * h);
}

}  // namespace

std::size_t OdeSolution::locate(double r) const {
  auto it = std::upper_bound(r_.begin(), r_.end(), r);
  std::size_t i = static_cast<std::size_t>(it - r_.begin());
  if (i == 0) return 0;
  if (i >= r_.size()) return r_.size() - 2;
  return i - 1;
}

double OdeSolution::eval(double r) const {
  if (r <= r_.front()) {
    if (has_tail_) {
      if (r <= 0.0) return 0.0;
      return y_.front() * std::pow(r / r_.front(), tail_exponent_);
    }
    const double slack = 1e-9 * (1.0 + std::abs(r_.front()));
    if (r < r_.front() - slack)
      fail(ErrorCode::OutOfDomain, "ODE dense output queried before start");
    return y_.front();
  }
  if (r >= r_.back()) {
    const double slack = 1e-9 * (1.0 + std::abs(r_.back()));
    if (r > r_.back() + slack)
      fail(ErrorCode::OutOfDomain, "ODE dense output queried past end");
    return y_.back();
  }
  const std::size_t i = locate(r);
  const double h = r_[i + 1] - r_[i];
  return hermite((r - r_[i]) / h, h, y_[i], f_[i], y_[i + 1], f_[i + 1]);
}

double OdeSolution::deriv(double r) const {
  if (r <= r_.front()) {
    if (has_tail_ && r > 0.0)
      return tail_exponent_ * eval(r) / r;
    return f_.front();
  }
  if (r >= r_.back()) return f_.back();
  const std::size_t i = locate(r);
  const double h = r_[i + 1] - r_[i];
  return hermite_d((r - r_[i]) / h, h, y_[i], f_[i], y_[i + 1], f_[i + 1]);
}

double OdeSolution::deriv2(double r) const {
  if (r <= r_.front()) {
    if (has_tail_ && r > 0.0) {
      const double k = tail_exponent_;
      return k * (k - 1.0) * eval(r) / (r * r);
    }
    r = r_.front();
  }
  if (r >= r_.back()) r = r_.back();
  const std::size_t i = locate(std::min(r, r_.back() * (1.0 - 1e-15)));
  const double h = r_[i + 1] - r_[i];
  return hermite_dd((r - r_[i]) / h, h, y_[i], f_[i], y_[i + 1], f_[i + 1]);
}

RadialFunction OdeSolution::as_radial() const {
  auto self = std::make_shared<OdeSolution>(*this);
  return RadialFunction(
      [self](double r) {
        return Jet2{self->eval(r), self->deriv(r), self->deriv2(r)};
      },
      back());
}

OdeSolution solve_ivp_regularized(
    const std::function<double(double, double)>& rhs, double r0, double y0,
    double r_end, const IvpOptions& opts) {
  if (!(r_end > r0)) fail(ErrorCode::DomainError, "solve_ivp: r_end must exceed r0");
  if (!(opts.tol > 0.0)) fail(ErrorCode::DomainError, "solve_ivp: tol must be > 0");

  OdeSolution sol;
  double r = r0;
  double y = y0;

  if (opts.leading_exponent) {
    const double k = *opts.leading_exponent;
    const double eps = opts.start_offset * (r_end - r0);
    r = r0 + eps;
    y = (k == 0.0) ? y0 : std::pow(eps, k);
    sol.tail_exponent_ = k;
    sol.has_tail_ = true;
  } else if (!std::isfinite(rhs(r, y))) {
    fail(ErrorCode::SingularityUnhandled,
         "rhs singular at the start and no leading exponent was given");
  }

  double f = rhs(r, y);
  if (!std::isfinite(f))
    fail(ErrorCode::NonFinite, "rhs not finite at integration start");

  sol.r_.push_back(r);
  sol.y_.push_back(y);
  sol.f_.push_back(f);

  const double span = r_end - r;
  double h_max = opts.max_step.value_or(span / 16.0);
  h_max = std::min(h_max, span);
  double h = std::min(h_max, std::max(1e-6 * span, 0.25 * std::abs(r)));
  if (h <= 0.0) h = 1e-6 * span;

  const int kMaxSteps = 200000;
  int steps = 0;

  while (r < r_end) {
    if (++steps > kMaxSteps)
      fail(ErrorCode::ToleranceNotMet, "solve_ivp: step budget exhausted");
    h = std::min(h, r_end - r);

    const double k1 = f;
    const double k2 = rhs(r + h * 0.2, y + h * (a21 * k1));
    const double k3 = rhs(r + h * 0.3, y + h * (a31 * k1 + a32 * k2));
    const double k4 = rhs(r + h * 0.8, y + h * (a41 * k1 + a42 * k2 + a43 * k3));
    const double k5 =
        rhs(r + h * (8.0 / 9.0), y + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4));
    const double y6 = y + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5);
    const double k6 = rhs(r + h, y6);
    const double y_new = y + h * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
    const double k7 = rhs(r + h, y_new);

    if (!std::isfinite(y_new) || !std::isfinite(k7))
      fail(ErrorCode::NonFinite, "solve_ivp: solution or rhs became non-finite");

    const double scale = std::max(1.0, std::max(std::abs(y), std::abs(y_new)));
    const double err =
        std::abs(h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7));

    bool accept = err <= opts.tol * scale;
    if (accept) {
      // Dense-output defect: the cubic Hermite interpolant must satisfy the
      // ODE at the step midpoint to the same tolerance.
      const double ym = hermite(0.5, h, y, k1, y_new, k7);
      const double dm = hermite_d(0.5, h, y, k1, y_new, k7);
      const double defect = std::abs(dm - rhs(r + 0.5 * h, ym)) * h;
      if (defect > 4.0 * opts.tol * scale) accept = false;
    }

    if (accept) {
      r += h;
      y = y_new;
      f = k7;
      sol.r_.push_back(r);
      sol.y_.push_back(y);
      sol.f_.push_back(f);
      if (std::abs(y) > opts.overflow_guard)
        fail(ErrorCode::Blowup, "solve_ivp: solution exceeded overflow guard");
      const double grow =
          (err > 0.0) ? 0.9 * std::pow(opts.tol * scale / err, 0.2) : 5.0;
      h = std::min(h_max, h * std::clamp(grow, 0.2, 5.0));
    } else {
      h *= 0.5;
      if (h < 1e-14 * std::max(1.0, std::abs(r)))
        fail(ErrorCode::ToleranceNotMet, "solve_ivp: step size underflow");
    }
  }
  return sol;
}

}  // namespace torsion
