#include "torsion/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <string>

#include "torsion/errors.hpp"

namespace torsion {

namespace {

// Gauss 7 / Kronrod 15 nodes and weights (QUADPACK dqk15 constants).
constexpr double kXgk[8] = {
    0.9914553711208126, 0.9491079123427585, 0.8648644233597691,
    0.7415311855993944, 0.5860872354676911, 0.4058451513773972,
    0.2077849550078985, 0.0};
constexpr double kWgk[8] = {
    0.02293532201052922, 0.06309209262997855, 0.1047900103222502,
    0.1406532597155259,  0.1690047266392679,  0.1903505780647854,
    0.2044329400752989,  0.2094821410847278};
constexpr double kWg[4] = {0.1294849661688697, 0.2797053914892767,
                           0.3818300505051189, 0.4179591836734694};

struct Panel {
  double a, b;
  double value;
  double error;
  bool operator<(const Panel& other) const { return error < other.error; }
};

Panel kronrod15(const std::function<double(double)>& f, double a, double b) {
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);

  double fv[15];
  const double fc = f(center);
  fv[14] = fc;
  for (int i = 0; i < 7; ++i) {
    const double dx = half * kXgk[i];
    fv[2 * i] = f(center - dx);
    fv[2 * i + 1] = f(center + dx);
  }
  for (double v : fv)
    if (!std::isfinite(v))
      fail(ErrorCode::NonFinite, "integrand is not finite on the interval");

  double resk = kWgk[7] * fc;
  double resg = kWg[3] * fc;
  double resabs = std::abs(resk);
  for (int i = 0; i < 7; ++i) {
    const double sum = fv[2 * i] + fv[2 * i + 1];
    resk += kWgk[i] * sum;
    resabs += kWgk[i] * (std::abs(fv[2 * i]) + std::abs(fv[2 * i + 1]));
    if (i % 2 == 1) resg += kWg[i / 2] * sum;
  }

  const double reskh = resk * 0.5;
  double resasc = kWgk[7] * std::abs(fc - reskh);
  for (int i = 0; i < 7; ++i)
    resasc += kWgk[i] * (std::abs(fv[2 * i] - reskh) + std::abs(fv[2 * i + 1] - reskh));

  resasc *= half;
  resabs *= half;
  double err = std::abs((resk - resg) * half);
  if (resasc != 0.0 && err != 0.0)
    err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
  const double eps_floor = 50.0 * std::numeric_limits<double>::epsilon() * resabs;
  err = std::max(err, eps_floor);

  return {a, b, resk * half, err};
}

}  // namespace

double integrate(const std::function<double(double)>& f, double a, double b,
                 double tol) {
  if (!(tol > 0.0)) fail(ErrorCode::DomainError, "integrate: tol must be > 0");
  if (!(a <= b)) fail(ErrorCode::OutOfDomain, "integrate: requires a <= b");
  if (a == b) return 0.0;

  constexpr int kMaxPanels = 4096;

  std::priority_queue<Panel> panels;
  panels.push(kronrod15(f, a, b));
  double total = panels.top().value;
  double total_err = panels.top().error;
  int count = 1;

  while (total_err > tol * std::max(1.0, std::abs(total))) {
    Panel worst = panels.top();
    const double mid = 0.5 * (worst.a + worst.b);
    if (mid <= worst.a || mid >= worst.b) break;  // cannot refine further
    if (count + 1 > kMaxPanels)
      fail(ErrorCode::ToleranceNotMet,
           "integrate: refinement budget exhausted at tol=" + std::to_string(tol));
    panels.pop();
    Panel left = kronrod15(f, worst.a, mid);
    Panel right = kronrod15(f, mid, worst.b);
    total += left.value + right.value - worst.value;
    total_err += left.error + right.error - worst.error;
    panels.push(left);
    panels.push(right);
    ++count;
  }
  return total;
}

double integrate(const RadialFunction& f, double a, double b, double tol) {
  return integrate([&f](double r) { return f.eval(r); }, a, b, tol);
}

}  // namespace torsion
