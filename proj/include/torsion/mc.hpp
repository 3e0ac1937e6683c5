#pragma once

#include <cstdint>

#include "torsion/model_space.hpp"

namespace torsion {

// Monte Carlo configuration for the radial diffusion with generator Delta,
//   dr = sqrt(2) dB + (m-1) eta_w(r) dt,
// reflected at the pole guard. Paths are keyed by (seed, path index) through
// a counter-based generator, so estimates are bit-identical for any worker
// count.
struct McConfig {
  long paths = 100000;
  double dt = 1e-4;
  std::uint64_t seed = 0;
  double start_radius = 0.0;
  double exit_radius = 1.0;
  double pole_guard = -1.0;  // <= 0 selects the default 1e-4 * exit_radius
  int workers = 1;
};

struct McEstimate {
  double mean = 0.0;
  double stderr_ = 0.0;
  long paths_used = 0;
};

// Mean of the first times r >= exit_radius; targets E^w_R(start_radius).
// Throws StepTooLarge if dt * max drift on [eps, R] exceeds 0.1 R.
McEstimate simulate_exit_time(const ModelSpace& space, const McConfig& cfg);

// Volume-weighted mean exit time over stratified start radii, times the ball
// volume; targets the torsional rigidity A_1(B_R).
McEstimate estimate_torsional_rigidity(const ModelSpace& space, double R,
                                       const McConfig& cfg);

}  // namespace torsion
