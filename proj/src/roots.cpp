#include "torsion/roots.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "torsion/errors.hpp"

namespace torsion {

double invert_monotone(const std::function<double(double)>& f, double target,
                       double lo, double hi, double tol) {
  if (!(lo <= hi)) fail(ErrorCode::DomainError, "invert_monotone: lo > hi");
  double fa = f(lo) - target;
  double fb = f(hi) - target;
  if (!std::isfinite(fa) || !std::isfinite(fb))
    fail(ErrorCode::NonFinite, "invert_monotone: endpoint value not finite");
  if (fa == 0.0) return lo;
  if (fb == 0.0) return hi;
  if (fa * fb > 0.0)
    fail(ErrorCode::NotBracketed, "target outside [f(lo), f(hi)]");

  const double range = std::abs(fb - fa);
  const double ftol = std::max(tol, 0.0);

  // Brent's method.
  double a = lo, b = hi, c = hi;
  double fc = fb;
  double d = b - a, e = d;
  for (int iter = 0; iter < 200; ++iter) {
    if (fb * fc > 0.0) {
      c = a;
      fc = fa;
      d = e = b - a;
    }
    if (std::abs(fc) < std::abs(fb)) {
      a = b; b = c; c = a;
      fa = fb; fb = fc; fc = fa;
    }
    const double eps_x = 2.0 * std::numeric_limits<double>::epsilon() *
                             std::abs(b) + 1e-300;
    const double xm = 0.5 * (c - b);
    if (std::abs(fb) <= ftol) return b;
    if (std::abs(xm) <= eps_x) {
      if (std::abs(fb) <= std::max(ftol, 1e-10 * (1.0 + range))) return b;
      fail(ErrorCode::NotMonotone,
           "bracket collapsed before reaching the requested residual");
    }
    if (std::abs(e) >= eps_x && std::abs(fa) > std::abs(fb)) {
      // Inverse quadratic / secant candidate.
      const double s = fb / fa;
      double p, q;
      if (a == c) {
        p = 2.0 * xm * s;
        q = 1.0 - s;
      } else {
        const double qq = fa / fc;
        const double rr = fb / fc;
        p = s * (2.0 * xm * qq * (qq - rr) - (b - a) * (rr - 1.0));
        q = (qq - 1.0) * (rr - 1.0) * (s - 1.0);
      }
      if (p > 0.0) q = -q;
      p = std::abs(p);
      const double min1 = 3.0 * xm * q - std::abs(eps_x * q);
      const double min2 = std::abs(e * q);
      if (2.0 * p < std::min(min1, min2)) {
        e = d;
        d = p / q;
      } else {
        d = xm;
        e = d;
      }
    } else {
      d = xm;
      e = d;
    }
    a = b;
    fa = fb;
    b += (std::abs(d) > eps_x) ? d : (xm > 0.0 ? eps_x : -eps_x);
    fb = f(b) - target;
    if (!std::isfinite(fb))
      fail(ErrorCode::NonFinite, "invert_monotone: function value not finite");
    // A monotone bracket keeps every evaluation within the endpoint range;
    // a value far outside signals a sign anomaly.
    if (std::abs(fb) > 4.0 * range + std::abs(fa))
      fail(ErrorCode::NotMonotone, "value outside the monotone envelope");
  }
  fail(ErrorCode::NotMonotone, "iteration budget exhausted");
}

double invert_monotone(const RadialFunction& f, double target, double lo,
                       double hi, double tol) {
  return invert_monotone([&f](double r) { return f.eval(r); }, target, lo, hi,
                         tol);
}

}  // namespace torsion
