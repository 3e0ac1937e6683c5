#pragma once

#include <optional>
#include <string>
#include <vector>

#include "torsion/comparison.hpp"

namespace torsion {

struct BalanceOptions {
  int grid_nodes = 512;
  double min_fraction = 1e-4;  // innermost grid node as a fraction of R
  double tol_band = 1e-9;      // |margin| below this counts as satisfied
};

// One inequality verified on a radius grid. The flag is consistent with the
// margins: satisfied <=> min margin >= -tol_band.
struct BalanceCheck {
  std::string name;
  std::vector<double> radii;
  std::vector<double> margins;
  bool satisfied = true;
  bool marginal = false;  // min margin inside the tolerance band
  double min_margin = 0.0;
  double min_margin_radius = 0.0;
  std::optional<double> first_violation_radius;
};

struct BalanceReport {
  std::optional<BalanceCheck> balanced_below;
  std::optional<BalanceCheck> balanced_above;
  std::optional<BalanceCheck> w_balanced_below;
  std::optional<BalanceCheck> W_balanced_above;
  std::optional<BalanceCheck> double_bound_hypothesis;
  std::optional<BalanceCheck> sandwich_lower;
  std::optional<BalanceCheck> sandwich_upper;
  std::optional<BalanceCheck> necessary_condition;
  bool degenerate_build = false;  // comparison space could not be built

  bool balanced_below_flag() const {
    return balanced_below && balanced_below->satisfied;
  }
  bool balanced_above_flag() const {
    return balanced_above && balanced_above->satisfied;
  }
  bool w_balanced_below_flag() const {
    return w_balanced_below && w_balanced_below->satisfied;
  }
  bool double_bound_ok() const {
    return double_bound_hypothesis && double_bound_hypothesis->satisfied &&
           sandwich_lower && sandwich_lower->satisfied && sandwich_upper &&
           sandwich_upper->satisfied && necessary_condition &&
           necessary_condition->satisfied;
  }
};

// Balance of the model space itself: q_w eta_w >= 1/m (below) and
// q_w eta_w <= 1/(m-1) (above). Both the quotient-product form and the
// derivative form are evaluated; a sign-level disagreement between the two
// throws FormDisagreement.
BalanceReport check_model_balance(const ModelSpace& space, double R,
                                  const BalanceOptions& opts = {});

// w-balance from below of the comparison space:
// q_W(s)(eta_w - h) >= g/m, cross-checked against d/dr(q_W(s(r))/(g w)) <= 0.
BalanceReport check_w_balanced_below(const ConstellationSpec& spec,
                                     const ComparisonSpace& C,
                                     const BalanceOptions& opts = {});

// Same check from the spec alone; if the comparison space degenerates
// (eta_w - h not behaving like 1/r near the pole) the verdict is reported
// from the sign of eta_w - h, since the left side is then bounded by 0.
BalanceReport check_w_balanced_below(const ConstellationSpec& spec,
                                     const BalanceOptions& opts = {});

// The two-sided sandwich on q_W plus its hypothesis and the necessary
// condition g eta_w + g' >= 0. Also reports W-balance from above (q_W' >= 0).
BalanceReport check_double_bound(const ConstellationSpec& spec,
                                 const ComparisonSpace& C,
                                 const BalanceOptions& opts = {});

}  // namespace torsion
