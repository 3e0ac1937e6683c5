#pragma once

#include <cmath>
#include <limits>

#include "torsion/errors.hpp"

namespace torsion {

// Second-order jet: value with first and second derivative, propagated
// exactly through arithmetic. This is what makes eta_w = w'/w usable near
// r = 0 without finite-difference cancellation.
struct Jet2 {
  double v = 0.0;
  double d1 = 0.0;
  double d2 = 0.0;

  static Jet2 variable(double r) { return {r, 1.0, 0.0}; }
  static Jet2 constant(double c) { return {c, 0.0, 0.0}; }
};

inline Jet2 operator-(const Jet2& a) { return {-a.v, -a.d1, -a.d2}; }

inline Jet2 operator+(const Jet2& a, const Jet2& b) {
  return {a.v + b.v, a.d1 + b.d1, a.d2 + b.d2};
}

inline Jet2 operator-(const Jet2& a, const Jet2& b) {
  return {a.v - b.v, a.d1 - b.d1, a.d2 - b.d2};
}

inline Jet2 operator*(const Jet2& a, const Jet2& b) {
  return {a.v * b.v, a.d1 * b.v + a.v * b.d1,
          a.d2 * b.v + 2.0 * a.d1 * b.d1 + a.v * b.d2};
}

inline Jet2 operator/(const Jet2& a, const Jet2& b) {
  const double q = a.v / b.v;
  const double q1 = (a.d1 - q * b.d1) / b.v;
  const double q2 = (a.d2 - 2.0 * q1 * b.d1 - q * b.d2) / b.v;
  return {q, q1, q2};
}

inline Jet2 operator*(double c, const Jet2& a) { return {c * a.v, c * a.d1, c * a.d2}; }
inline Jet2 operator*(const Jet2& a, double c) { return c * a; }
inline Jet2 operator+(const Jet2& a, double c) { return {a.v + c, a.d1, a.d2}; }
inline Jet2 operator+(double c, const Jet2& a) { return a + c; }
inline Jet2 operator-(const Jet2& a, double c) { return {a.v - c, a.d1, a.d2}; }
inline Jet2 operator-(double c, const Jet2& a) { return {c - a.v, -a.d1, -a.d2}; }

// Composition with a scalar function given value/first/second at a.v.
inline Jet2 compose(const Jet2& a, double h, double h1, double h2) {
  return {h, h1 * a.d1, h2 * a.d1 * a.d1 + h1 * a.d2};
}

inline Jet2 sin(const Jet2& a) {
  const double s = std::sin(a.v), c = std::cos(a.v);
  return compose(a, s, c, -s);
}

inline Jet2 cos(const Jet2& a) {
  const double s = std::sin(a.v), c = std::cos(a.v);
  return compose(a, c, -s, -c);
}

inline Jet2 sinh(const Jet2& a) {
  const double s = std::sinh(a.v), c = std::cosh(a.v);
  return compose(a, s, c, s);
}

inline Jet2 cosh(const Jet2& a) {
  const double s = std::sinh(a.v), c = std::cosh(a.v);
  return compose(a, c, s, c);
}

inline Jet2 tanh(const Jet2& a) {
  const double t = std::tanh(a.v);
  const double sech2 = 1.0 - t * t;
  return compose(a, t, sech2, -2.0 * t * sech2);
}

inline Jet2 exp(const Jet2& a) {
  const double e = std::exp(a.v);
  return compose(a, e, e, e);
}

inline Jet2 log(const Jet2& a) {
  if (a.v <= 0.0) fail(ErrorCode::DomainError, "log of non-positive value");
  return compose(a, std::log(a.v), 1.0 / a.v, -1.0 / (a.v * a.v));
}

inline Jet2 sqrt(const Jet2& a) {
  if (a.v < 0.0) fail(ErrorCode::DomainError, "sqrt of negative value");
  const double s = std::sqrt(a.v);
  if (a.v == 0.0) {
    // Derivative blows up at the origin; report the IEEE limit.
    const double inf = std::numeric_limits<double>::infinity();
    return {0.0, a.d1 == 0.0 ? 0.0 : inf, a.d2 == 0.0 ? 0.0 : inf};
  }
  return compose(a, s, 0.5 / s, -0.25 / (a.v * s));
}

// a^n for integer n; valid for any sign of a.
inline Jet2 pow(const Jet2& a, long n) {
  if (n == 0) return Jet2::constant(1.0);
  if (n == 1) return a;
  if (n < 0) return Jet2::constant(1.0) / pow(a, -n);
  const double p = std::pow(a.v, static_cast<double>(n));
  const double pm1 = std::pow(a.v, static_cast<double>(n - 1));
  const double pm2 = (n >= 2) ? std::pow(a.v, static_cast<double>(n - 2)) : 0.0;
  const double dn = static_cast<double>(n);
  return compose(a, p, dn * pm1, dn * (dn - 1.0) * pm2);
}

// a^c for a real constant exponent.
inline Jet2 pow(const Jet2& a, double c) {
  if (c == std::floor(c) && std::abs(c) < 1e15) return pow(a, static_cast<long>(c));
  if (a.v < 0.0)
    fail(ErrorCode::DomainError, "negative base with non-integer exponent");
  const double p = std::pow(a.v, c);
  const double pm1 = std::pow(a.v, c - 1.0);
  const double pm2 = std::pow(a.v, c - 2.0);
  return compose(a, p, c * pm1, c * (c - 1.0) * pm2);
}

// Fully general a^b = exp(b log a).
inline Jet2 pow(const Jet2& a, const Jet2& b) {
  if (b.d1 == 0.0 && b.d2 == 0.0) return pow(a, b.v);
  return exp(b * log(a));
}

}  // namespace torsion
