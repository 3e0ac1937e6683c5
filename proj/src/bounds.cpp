#include "torsion/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "torsion/balance.hpp"
#include "torsion/symmetrize.hpp"

namespace torsion {

BoundVerdict make_verdict(double lhs, double rhs, Relation relation) {
  BoundVerdict v;
  v.lhs = lhs;
  v.rhs = rhs;
  v.relation = relation;
  v.margin = (relation == Relation::LessEqual) ? rhs - lhs : lhs - rhs;
  const double scale = std::max({std::abs(lhs), std::abs(rhs), 1e-300});
  v.equality_detected = std::abs(v.margin) <= 1e-7 * scale;
  return v;
}

const char* average_exit_class_name(AverageExitClass c) {
  switch (c) {
    case AverageExitClass::FiniteAverage: return "finite-average";
    case AverageExitClass::InfiniteAverage: return "infinite-average";
    case AverageExitClass::Inconclusive: return "inconclusive";
  }
  return "?";
}

IsoperimetricReference isoperimetric_bound(const ConstellationSpec& spec,
                                           const ComparisonSpace& C) {
  IsoperimetricReference ref;
  const double R = spec.R;
  const Jet2 w = spec.w.jet(R);
  const double eta_R = w.d1 / w.v;
  const double g_R = spec.g.eval(R);
  ref.cap = spec.m * (eta_R - spec.h.eval(R)) / g_R;

  const double s_eval =
      (spec.direction == Direction::Below) ? C.s_max() : C.stretch(R);
  ref.model_quotient = 1.0 / C.quotient(s_eval);
  ref.chain = make_verdict(ref.model_quotient, ref.cap, Relation::LessEqual);
  ref.submanifold_relation = (spec.direction == Direction::Below)
                                 ? Relation::LessEqual
                                 : Relation::GreaterEqual;

  // The theorem assumes the comparison space is w-balanced from below;
  // verify and warn rather than refuse.
  BalanceOptions bopts;
  bopts.grid_nodes = 128;
  const BalanceReport balance = check_w_balanced_below(spec, C, bopts);
  if (!balance.w_balanced_below_flag()) {
    ref.balance_warning = true;
    ref.warning = "comparison space is not w-balanced from below";
  }
  return ref;
}

VolumeBoundResult volume_bound(const ConstellationSpec& spec,
                               const ComparisonSpace& C, double r,
                               std::optional<double> measured_volume) {
  if (r < 0.0 || r > spec.R * (1.0 + 1e-12))
    fail(ErrorCode::OutOfDomain, "volume_bound: r outside [0, R]");
  const ModelSpace W = C.as_model();
  VolumeBoundResult result;
  if (spec.direction == Direction::Below) {
    result.reference = W.ball_volume(C.stretch(r));
    result.submanifold_relation = Relation::LessEqual;
  } else {
    result.reference = W.ball_volume(std::min(r, W.r_max()));
    result.submanifold_relation = Relation::GreaterEqual;
  }
  if (measured_volume)
    result.verdict = make_verdict(*measured_volume, result.reference,
                                  result.submanifold_relation);
  return result;
}

TorsionalBoundResult torsional_bound(const ConstellationSpec& spec,
                                     const ComparisonSpace& C,
                                     double domain_volume,
                                     std::optional<double> measured_A1) {
  const ModelSpace W = C.as_model();
  TorsionalBoundResult result;
  result.T_radius = symmetrized_radius(W, domain_volume);
  result.reference = W.torsional_rigidity(result.T_radius).value;
  result.submanifold_relation = (spec.direction == Direction::Below)
                                    ? Relation::GreaterEqual
                                    : Relation::LessEqual;
  if (measured_A1)
    result.verdict =
        make_verdict(*measured_A1, result.reference, result.submanifold_relation);
  return result;
}

IntrinsicComparison intrinsic_compare(const ModelSpace& ambient,
                                      const ModelSpace& model, double R,
                                      Direction direction) {
  if (R <= 0.0 || R > ambient.r_max() * (1.0 + 1e-12))
    fail(ErrorCode::OutOfDomain, "intrinsic_compare: R outside (0, r_max]");
  if (ambient.dim() != model.dim())
    fail(ErrorCode::Admissibility, "intrinsic_compare: dimension mismatch");

  // Pointwise curvature ordering -w''/w between ambient and model.
  for (double r : Grid::geometric_nodes(R, 128)) {
    const Jet2 wa = ambient.warping().jet(r);
    const Jet2 wm = model.warping().jet(r);
    const double Ka = -wa.d2 / wa.v;
    const double Km = -wm.d2 / wm.v;
    const double slack = 1e-9 * (1.0 + std::abs(Ka) + std::abs(Km));
    const bool ok = (direction == Direction::Below) ? (Ka >= Km - slack)
                                                    : (Ka <= Km + slack);
    if (!ok)
      fail(ErrorCode::CurvatureOrderViolated,
           "radial curvature ordering fails at r = " + std::to_string(r));
  }

  IntrinsicComparison cmp;
  const double lhs = ambient.torsional_rigidity(R).value;
  cmp.lhs_volume = ambient.ball_volume(R);
  cmp.T_radius = symmetrized_radius(model, cmp.lhs_volume);
  const double rhs = model.torsional_rigidity(cmp.T_radius).value;
  cmp.verdict = make_verdict(lhs, rhs,
                             direction == Direction::Below
                                 ? Relation::GreaterEqual
                                 : Relation::LessEqual);

  // Balance hypotheses of the corresponding theorem, checked on the model.
  BalanceOptions bopts;
  bopts.grid_nodes = 128;
  const double R_check = std::min(std::max(R, cmp.T_radius), model.r_max());
  const BalanceReport balance = check_model_balance(model, R_check, bopts);
  const bool need_below = direction == Direction::Above;  // totally balanced
  if (!balance.balanced_above_flag() ||
      (need_below && !balance.balanced_below_flag())) {
    cmp.balance_warning = true;
    cmp.warning = need_below ? "model space is not totally balanced"
                             : "model space is not balanced from above";
  }
  return cmp;
}

AverageExitReport average_exit_limit(const ModelSpace& space, double R_probe,
                                     const AverageExitOptions& opts) {
  if (!(R_probe > 0.0))
    fail(ErrorCode::DomainError, "average_exit_limit: R_probe must be > 0");
  if (R_probe > space.r_max() * (1.0 + 1e-12))
    fail(ErrorCode::OutOfDomain, "average_exit_limit: R_probe beyond r_max");
  if (opts.rungs < 6)
    fail(ErrorCode::DomainError, "average_exit_limit: need >= 6 rungs");

  AverageExitReport report;

  // Volume divergence probe: the ball volume should keep growing with the
  // ladder; a model that tops out (conjugate point) cannot satisfy the
  // infinite-volume hypothesis.
  report.ladder.reserve(static_cast<std::size_t>(opts.rungs));
  for (int j = opts.rungs - 1; j >= 0; --j) {
    const double R = R_probe * std::pow(opts.ladder_ratio, -j);
    AverageExitLadderRow row;
    row.R = R;
    row.q = space.isoperimetric_quotient(R);
    row.ball_volume = space.ball_volume(R);
    if (opts.with_rigidity) {
      const double a1 = space.torsional_rigidity(R).value;
      row.a1_over_vol = a1 / row.ball_volume;
      row.gap = std::abs(row.a1_over_vol - row.q * row.q);
    } else {
      row.a1_over_vol = 0.0;
      row.gap = 0.0;
    }
    report.ladder.push_back(row);
  }

  const auto& L = report.ladder;
  const std::size_t n = L.size();
  report.volume_divergent =
      L[n - 1].ball_volume > 2.0 * L[n / 2].ball_volume &&
      L[n - 1].ball_volume > L[n - 2].ball_volume;

  // Stabilized: the last three raw quotients agree to stabilization_tol.
  const double q_last = L[n - 1].q;
  const double scale = std::max(1.0, std::abs(q_last));
  const bool stabilized =
      std::abs(L[n - 1].q - L[n - 2].q) <= opts.stabilization_tol * scale &&
      std::abs(L[n - 2].q - L[n - 3].q) <= opts.stabilization_tol * scale;

  // Steady geometric growth of q along the top rungs signals divergence.
  const double growth_floor = 1.0 + 0.5 * (opts.ladder_ratio - 1.0);
  const bool growing = L[n - 1].q > growth_floor * L[n - 2].q &&
                       L[n - 2].q > growth_floor * L[n - 3].q &&
                       L[n - 3].q > growth_floor * L[n - 4].q;

  report.q_inf = q_last;
  report.limit = q_last * q_last;
  if (stabilized && report.volume_divergent) {
    report.classification = AverageExitClass::FiniteAverage;
    const double eta = space.eta(R_probe);
    if (eta > 0.0) report.eta_bound = 1.0 / ((space.dim() - 1) * eta);
  } else if (growing && report.volume_divergent) {
    report.classification = AverageExitClass::InfiniteAverage;
    report.limit = std::numeric_limits<double>::infinity();
  } else {
    report.classification = AverageExitClass::Inconclusive;
  }
  return report;
}

}  // namespace torsion
