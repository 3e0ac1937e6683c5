#pragma once

#include <optional>
#include <string>
#include <vector>

#include "torsion/comparison.hpp"
#include "torsion/model_space.hpp"

namespace torsion {

enum class Relation { LessEqual, GreaterEqual };

// One verified inequality. The margin is signed so that "holds" means
// margin >= 0 regardless of the direction.
struct BoundVerdict {
  double lhs = 0.0;
  double rhs = 0.0;
  Relation relation = Relation::LessEqual;
  double margin = 0.0;
  bool equality_detected = false;
  bool holds(double tol = 0.0) const { return margin >= -tol; }
};

BoundVerdict make_verdict(double lhs, double rhs, Relation relation);

// Model-side isoperimetric references: the quotient of the comparison ball
// and the closed-form cap m (eta_w(R) - h(R)) / g(R). For a below-bounded
// constellation the chain quotient <= cap holds and a submanifold's quotient
// sits below the comparison quotient; above-bounded reverses the role.
struct IsoperimetricReference {
  double model_quotient = 0.0;  // Vol(boundary)/Vol(ball) of the W-ball
  double cap = 0.0;             // m (eta_w(R) - h(R)) / g(R)
  BoundVerdict chain;           // model_quotient vs cap (below direction)
  Relation submanifold_relation = Relation::LessEqual;
  bool balance_warning = false;
  std::string warning;
};

IsoperimetricReference isoperimetric_bound(const ConstellationSpec& spec,
                                           const ComparisonSpace& C);

struct VolumeBoundResult {
  double reference = 0.0;  // Vol(B^W_{s(r)}) below / Vol(B^W_r) above
  Relation submanifold_relation = Relation::LessEqual;
  std::optional<BoundVerdict> verdict;  // when a measured volume is supplied
};

VolumeBoundResult volume_bound(const ConstellationSpec& spec,
                               const ComparisonSpace& C, double r,
                               std::optional<double> measured_volume = {});

struct TorsionalBoundResult {
  double reference = 0.0;  // A_1 of the symmetrized W-ball
  double T_radius = 0.0;   // volume-matching radius
  Relation submanifold_relation = Relation::GreaterEqual;
  std::optional<BoundVerdict> verdict;
};

// rhs of the torsional rigidity comparison: A_1(B^W_T) with
// ball_volume(W-model, T) = domain_volume. Throws InsufficientRoom when the
// W-model cannot hold the domain volume.
TorsionalBoundResult torsional_bound(const ConstellationSpec& spec,
                                     const ComparisonSpace& C,
                                     double domain_volume,
                                     std::optional<double> measured_A1 = {});

struct IntrinsicComparison {
  BoundVerdict verdict;  // A_1(B^N_R) vs A_1(B^w_{T(R)})
  double T_radius = 0.0;
  double lhs_volume = 0.0;
  bool balance_warning = false;
  std::string warning;
};

// Intrinsic version: the ambient N is itself a model space. direction=below
// means the curvature of N dominates the model's (verdict >=), above the
// reverse (verdict <=). Throws CurvatureOrderViolated if the pointwise
// curvature ordering fails on (0, R].
IntrinsicComparison intrinsic_compare(const ModelSpace& ambient,
                                      const ModelSpace& model, double R,
                                      Direction direction);

enum class AverageExitClass { FiniteAverage, InfiniteAverage, Inconclusive };

const char* average_exit_class_name(AverageExitClass c);

struct AverageExitLadderRow {
  double R;
  double q;
  double ball_volume;
  double a1_over_vol;
  double gap;  // |A1/Vol - q^2|
};

struct AverageExitReport {
  AverageExitClass classification = AverageExitClass::Inconclusive;
  double q_inf = 0.0;                  // estimate of lim q_W
  double limit = 0.0;                  // q_inf^2
  std::optional<double> eta_bound;     // 1/((m-1) eta_W(R_probe)), finite case
  bool volume_divergent = false;
  std::vector<AverageExitLadderRow> ladder;
};

struct AverageExitOptions {
  double ladder_ratio = 1.1;
  int rungs = 24;
  double stabilization_tol = 1e-4;
  bool with_rigidity = true;  // fill a1_over_vol/gap columns
};

AverageExitReport average_exit_limit(const ModelSpace& space, double R_probe,
                                     const AverageExitOptions& opts = {});

}  // namespace torsion
