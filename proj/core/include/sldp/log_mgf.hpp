#pragma once

#include "sldp/common.hpp"
#include "sldp/family.hpp"

namespace sldp {

/// How much of an evaluation to compute: the value, the gradient as well, or
/// the gradient and Hessian.
enum class Order { Value = 0, Gradient = 1, Hessian = 2 };

/// Lambda(s1, s2) = log E exp(s1 xi + s2 r(xi)). Infinite iff s2 >= T. The
/// returned gradient/Hessian are with respect to (s1, s2) and are left empty
/// when the value is infinite. Throws NumericError if quadrature fails.
Evaluation lambda_full(const MeasureFamily& family, double s1, double s2, Order order);
double lambda_eval(const MeasureFamily& family, double s1, double s2);

/// Lambda-bar(s1, s2) = log E exp(s1 xi^2 + s2 r(xi)).
Evaluation lambda_bar_full(const MeasureFamily& family, double s1, double s2, Order order);
double lambda_bar_eval(const MeasureFamily& family, double s1, double s2);

/// Bound-to-family view of Lambda, convenient as a function object.
class LogMGF {
 public:
  explicit LogMGF(MeasureFamily family) : family_(family) {}
  const MeasureFamily& family() const { return family_; }
  double domain_bound() const { return family_.domain_bound(); }
  double operator()(double s1, double s2) const { return lambda_eval(family_, s1, s2); }
  Evaluation evaluate(double s1, double s2, Order order = Order::Hessian) const {
    return lambda_full(family_, s1, s2, order);
  }

 private:
  MeasureFamily family_;
};

}  // namespace sldp
