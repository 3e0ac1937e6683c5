#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <vector>

#include "torsion/radial.hpp"

namespace torsion {

struct IvpOptions {
  double tol = 1e-10;
  // Leading-order power exponent k for a right-hand side singular at r0 = 0:
  // the solution is started at eps = start_offset * (r_end - r0) with
  // y(eps) = eps^k, i.e. leading coefficient 1.
  std::optional<double> leading_exponent{};
  double start_offset = 1e-6;
  double overflow_guard = 1e250;
  std::optional<double> max_step{};
};

// Dense-output solution of dy/dr = rhs(r, y) on [r0, r_end].
class OdeSolution {
 public:
  double front() const { return r_.front(); }
  double back() const { return r_.back(); }

  double eval(double r) const;
  double deriv(double r) const;
  double deriv2(double r) const;

  std::size_t steps() const { return r_.size() - 1; }

  // Wraps the dense output as a RadialFunction on [0, back()]; below the
  // integration start the stored leading behavior is used.
  RadialFunction as_radial() const;

 private:
  friend OdeSolution solve_ivp_regularized(
      const std::function<double(double, double)>& rhs, double r0, double y0,
      double r_end, const IvpOptions& opts);

  std::size_t locate(double r) const;

  std::vector<double> r_, y_, f_;
  // Power-law tail parameters for r below the start point (singular starts).
  double tail_exponent_ = 0.0;
  bool has_tail_ = false;
};

// Adaptive Runge-Kutta (Dormand-Prince 5(4)) with cubic Hermite dense output;
// an interpolation-defect control keeps the dense output at the requested
// tolerance, not just the step endpoints.
//
// Errors: Blowup if |y| exceeds the overflow guard, SingularityUnhandled if
// rhs is non-finite at the start and no leading exponent was supplied.
OdeSolution solve_ivp_regularized(
    const std::function<double(double, double)>& rhs, double r0, double y0,
    double r_end, const IvpOptions& opts = {});

}  // namespace torsion
