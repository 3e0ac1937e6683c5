#pragma once

#include <functional>

#include "torsion/radial.hpp"

namespace torsion {

// Adaptive Gauss-Kronrod 7-15 with mixed tolerance: the returned value I
// satisfies (estimated) |I - integral| <= tol * max(1, |I|).
//
// Throws NonFinite if the integrand produces NaN/inf on [a, b] and
// ToleranceNotMet if the refinement budget is exhausted first.
double integrate(const std::function<double(double)>& f, double a, double b,
                 double tol = 1e-10);

double integrate(const RadialFunction& f, double a, double b,
                 double tol = 1e-10);

}  // namespace torsion
