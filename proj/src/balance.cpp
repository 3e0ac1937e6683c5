#include "torsion/balance.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <string>
#include <tuple>

namespace torsion {

namespace {

// Assemble a BalanceCheck from margins on a grid; localizes the first
// violation by bisection between the last satisfied and first violated node.
BalanceCheck make_check(std::string name, std::vector<double> radii,
                        const std::function<double(double)>& margin_fn,
                        double tol_band) {
  BalanceCheck check;
  check.name = std::move(name);
  check.margins.reserve(radii.size());
  for (double r : radii) check.margins.push_back(margin_fn(r));
  check.radii = std::move(radii);

  check.min_margin = check.margins.front();
  check.min_margin_radius = check.radii.front();
  for (std::size_t i = 0; i < check.margins.size(); ++i) {
    if (check.margins[i] < check.min_margin) {
      check.min_margin = check.margins[i];
      check.min_margin_radius = check.radii[i];
    }
  }
  check.satisfied = check.min_margin >= -tol_band;
  check.marginal = check.satisfied && check.min_margin <= tol_band;

  if (!check.satisfied) {
    std::size_t first_bad = 0;
    while (check.margins[first_bad] >= -tol_band) ++first_bad;
    if (first_bad == 0) {
      check.first_violation_radius = check.radii.front();
    } else {
      double lo = check.radii[first_bad - 1];
      double hi = check.radii[first_bad];
      for (int iter = 0; iter < 40; ++iter) {
        const double mid = 0.5 * (lo + hi);
        if (margin_fn(mid) >= -tol_band)
          lo = mid;
        else
          hi = mid;
      }
      check.first_violation_radius = 0.5 * (lo + hi);
    }
  }
  return check;
}

double central_diff(const std::function<double(double)>& f, double r,
                    double delta) {
  return (f(r + delta) - f(r - delta)) / (2.0 * delta);
}

// Sign-level comparison of two margin forms that are analytically equal.
// NaN entries mark nodes where the finite-difference stencil did not fit.
void require_forms_agree(const BalanceCheck& quotient_form,
                         const std::vector<double>& deriv_margins,
                         double scale_tol) {
  for (std::size_t i = 0; i < quotient_form.margins.size(); ++i) {
    const double a = quotient_form.margins[i];
    const double b = deriv_margins[i];
    if (!std::isfinite(b)) continue;
    const bool a_bad = a < -scale_tol;
    const bool b_bad = b < -scale_tol;
    if (a_bad != b_bad && std::abs(a - b) > scale_tol)
      fail(ErrorCode::FormDisagreement,
           "quotient and derivative balance forms disagree at r = " +
               std::to_string(quotient_form.radii[i]) + " (" +
               std::to_string(a) + " vs " + std::to_string(b) + ")");
  }
}

constexpr double kNan = std::numeric_limits<double>::quiet_NaN();

}  // namespace

BalanceReport check_model_balance(const ModelSpace& space, double R,
                                  const BalanceOptions& opts) {
  if (R <= 0.0 || R > space.r_max() * (1.0 + 1e-12))
    fail(ErrorCode::OutOfDomain, "balance check radius outside (0, r_max]");
  const int m = space.dim();
  auto radii = Grid::geometric_nodes(R, opts.grid_nodes, opts.min_fraction);

  BalanceReport report;
  auto below_margin = [&](double r) {
    return space.isoperimetric_quotient(r) * space.eta(r) - 1.0 / m;
  };
  auto above_margin = [&](double r) {
    return 1.0 / (m - 1) - space.isoperimetric_quotient(r) * space.eta(r);
  };
  report.balanced_below =
      make_check("balanced-below", radii, below_margin, opts.tol_band);
  report.balanced_above =
      make_check("balanced-above", radii, above_margin, opts.tol_band);

  // Derivative forms: d/dr (q/w) <= 0 for below, q' >= 0 for above. Scaled by
  // w/m (resp. 1/(m-1)) they coincide with the quotient-product margins.
  std::vector<double> below_deriv, above_deriv;
  below_deriv.reserve(radii.size());
  above_deriv.reserve(radii.size());
  for (double r : radii) {
    const double delta = std::min({1e-4 * std::max(r, 0.01 * R), 0.49 * r,
                                   0.49 * (space.r_max() - r)});
    if (delta < 1e-9 * R) {
      below_deriv.push_back(kNan);
      above_deriv.push_back(kNan);
      continue;
    }
    auto q_over_w = [&](double x) {
      return space.isoperimetric_quotient(x) / space.warping().eval(x);
    };
    auto q_fn = [&](double x) { return space.isoperimetric_quotient(x); };
    below_deriv.push_back(-central_diff(q_over_w, r, delta) *
                          space.warping().eval(r) / m);
    above_deriv.push_back(central_diff(q_fn, r, delta) / (m - 1));
  }
  require_forms_agree(*report.balanced_below, below_deriv, 1e-6);
  require_forms_agree(*report.balanced_above, above_deriv, 1e-6);
  return report;
}

BalanceReport check_w_balanced_below(const ConstellationSpec& spec,
                                     const ComparisonSpace& C,
                                     const BalanceOptions& opts) {
  const int m = spec.m;
  auto radii = Grid::geometric_nodes(spec.R, opts.grid_nodes, opts.min_fraction);

  BalanceReport report;
  auto margin = [&](double r) {
    const Jet2 w = spec.w.jet(r);
    const double eta = w.d1 / w.v;
    return C.quotient(C.stretch(r)) * (eta - spec.h.eval(r)) -
           spec.g.eval(r) / m;
  };
  report.w_balanced_below =
      make_check("w-balanced-below", radii, margin, opts.tol_band);

  // Derivative form d/dr (q_W(s(r)) / (g w)) <= 0, rescaled by g^3 w / m so
  // that it matches the quotient margin node by node.
  std::vector<double> deriv_margins;
  deriv_margins.reserve(radii.size());
  auto v_fn = [&](double x) {
    return C.quotient(C.stretch(x)) / (spec.g.eval(x) * spec.w.eval(x));
  };
  for (double r : radii) {
    const double delta = std::min(
        {1e-4 * std::max(r, 0.01 * spec.R), 0.49 * r, 0.49 * (spec.R - r)});
    if (delta < 1e-9 * spec.R) {
      deriv_margins.push_back(kNan);
      continue;
    }
    const double g = spec.g.eval(r);
    deriv_margins.push_back(-central_diff(v_fn, r, delta) * g * g * g *
                            spec.w.eval(r) / m);
  }
  require_forms_agree(*report.w_balanced_below, deriv_margins, 1e-6);
  return report;
}

BalanceReport check_w_balanced_below(const ConstellationSpec& spec,
                                     const BalanceOptions& opts) {
  try {
    const ComparisonSpace C = ComparisonSpace::build(spec);
    return check_w_balanced_below(spec, C, opts);
  } catch (const Error& err) {
    if (err.code() != ErrorCode::NonPositiveLambda) throw;
  }

  // Degenerate comparison space. Wherever eta_w - h <= 0 the left side
  // q_W (eta_w - h) is bounded above by 0 < g/m, so -g/m bounds the margin.
  BalanceReport report;
  report.degenerate_build = true;
  auto radii = Grid::geometric_nodes(spec.R, opts.grid_nodes, opts.min_fraction);
  auto margin = [&](double r) {
    const Jet2 w = spec.w.jet(r);
    const double diff = w.d1 / w.v - spec.h.eval(r);
    const double g = spec.g.eval(r);
    if (diff <= 0.0) return -g / spec.m;
    return std::numeric_limits<double>::quiet_NaN();  // not determinable
  };
  BalanceCheck check;
  check.name = "w-balanced-below";
  check.radii = radii;
  check.satisfied = false;
  double min_margin = std::numeric_limits<double>::infinity();
  double min_radius = radii.front();
  for (double r : radii) {
    const double v = margin(r);
    check.margins.push_back(v);
    if (std::isfinite(v) && v < min_margin) {
      min_margin = v;
      min_radius = r;
    }
  }
  check.min_margin = min_margin;
  check.min_margin_radius = min_radius;
  check.first_violation_radius = radii.front();
  report.w_balanced_below = check;
  return report;
}

BalanceReport check_double_bound(const ConstellationSpec& spec,
                                 const ComparisonSpace& C,
                                 const BalanceOptions& opts) {
  const int m = spec.m;
  auto radii = Grid::geometric_nodes(spec.R, opts.grid_nodes, opts.min_fraction);

  auto parts = [&](double r) {
    const Jet2 w = spec.w.jet(r);
    const Jet2 g = spec.g.jet(r);
    const double eta = w.d1 / w.v;
    const double diff = eta - spec.h.eval(r);
    const double hypothesis = m * diff - g.v * g.v * eta - g.v * g.d1;
    return std::tuple<double, double, double, double>(eta, diff, hypothesis,
                                                      g.v);
  };

  BalanceReport report;
  report.double_bound_hypothesis = make_check(
      "double-bound-hypothesis", radii,
      [&](double r) { return std::get<2>(parts(r)); }, opts.tol_band);

  report.sandwich_lower = make_check(
      "sandwich-lower", radii,
      [&](double r) {
        auto [eta, diff, hyp, g] = parts(r);
        (void)eta;
        (void)hyp;
        return C.quotient(C.stretch(r)) - g / (m * diff);
      },
      opts.tol_band);

  report.sandwich_upper = make_check(
      "sandwich-upper", radii,
      [&](double r) {
        auto [eta, diff, hyp, g] = parts(r);
        (void)eta;
        if (hyp <= 0.0) return std::numeric_limits<double>::lowest();
        return g / hyp - C.quotient(C.stretch(r));
      },
      opts.tol_band);

  report.necessary_condition = make_check(
      "necessary-condition", radii,
      [&](double r) {
        const Jet2 w = spec.w.jet(r);
        const Jet2 g = spec.g.jet(r);
        return g.v * (w.d1 / w.v) + g.d1;
      },
      opts.tol_band);

  // W-balance from above of the built space: q_W'(s) >= 0 on the grid
  // (stencils clamped inside (0, s_max)).
  report.W_balanced_above = make_check(
      "W-balanced-above", radii,
      [&](double r) {
        const double ds = 1e-4 * C.s_max();
        const double s =
            std::clamp(C.stretch(r), 1.01 * ds, C.s_max() - 1.01 * ds);
        return (C.quotient(s + ds) - C.quotient(s - ds)) / (2.0 * ds);
      },
      opts.tol_band * 10.0 + 1e-7);

  return report;
}

}  // namespace torsion
