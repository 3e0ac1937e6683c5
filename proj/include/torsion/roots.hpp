#pragma once

#include <functional>

#include "torsion/radial.hpp"

namespace torsion {

// Solves f(r) = target for a strictly monotone f on [lo, hi] (increasing or
// decreasing). Returns r* with |f(r*) - target| <= tol.
//
// Errors: NotBracketed if target lies outside [f(lo), f(hi)], NotMonotone if
// the bracketing detects a sign anomaly.
double invert_monotone(const std::function<double(double)>& f, double target,
                       double lo, double hi, double tol = 1e-12);

double invert_monotone(const RadialFunction& f, double target, double lo,
                       double hi, double tol = 1e-12);

}  // namespace torsion
