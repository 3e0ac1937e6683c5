#pragma once

#include <functional>
#include <limits>
#include <memory>
#include <utility>
#include <vector>

#include "torsion/jet.hpp"

namespace torsion {

// A scalar function of the radius r >= 0 carrying exact first and second
// derivatives. Evaluation is pure; copies are cheap (shared callable).
class RadialFunction {
 public:
  using JetFn = std::function<Jet2(double)>;

  RadialFunction() = default;

  explicit RadialFunction(JetFn fn,
                          double r_max = std::numeric_limits<double>::infinity())
      : fn_(std::make_shared<JetFn>(std::move(fn))), r_max_(r_max) {}

  static RadialFunction constant(double c) {
    return RadialFunction([c](double) { return Jet2::constant(c); });
  }

  static RadialFunction identity() {
    return RadialFunction([](double r) { return Jet2::variable(r); });
  }

  bool valid() const { return static_cast<bool>(fn_); }
  double r_max() const { return r_max_; }

  Jet2 jet(double r) const {
    check_domain(r);
    return (*fn_)(r);
  }

  double eval(double r) const { return jet(r).v; }
  double operator()(double r) const { return eval(r); }
  double deriv(double r) const { return jet(r).d1; }
  double deriv2(double r) const { return jet(r).d2; }

  // Same function restricted (or extended) to another domain bound.
  RadialFunction with_r_max(double r_max) const {
    RadialFunction f = *this;
    f.r_max_ = r_max;
    return f;
  }

 private:
  void check_domain(double r) const {
    if (!fn_) fail(ErrorCode::DomainError, "uninitialized radial function");
    const double slack = 1e-9 * (1.0 + std::abs(r_max_ == std::numeric_limits<double>::infinity() ? 0.0 : r_max_));
    if (r < -slack || r > r_max_ + slack)
      fail(ErrorCode::OutOfDomain, "radius outside [0, r_max]");
  }

  std::shared_ptr<const JetFn> fn_;
  double r_max_ = std::numeric_limits<double>::infinity();
};

// Aligned (nodes, values) samples along the radius.
struct Grid {
  std::vector<double> nodes;
  std::vector<double> values;

  // Geometrically clustered nodes near 0 on (r_min, R]; resolves the 1/r
  // drift and the w ~ r behavior at the pole.
  static std::vector<double> geometric_nodes(double R, int n = 512,
                                             double min_fraction = 1e-4);
  static std::vector<double> uniform_nodes(double a, double b, int n);

  static Grid sample(const std::function<double(double)>& f,
                     std::vector<double> nodes);

  void validate() const;  // strictly increasing, >= 2 nodes, aligned sizes
};

}  // namespace torsion
