#pragma once

#include "sldp/common.hpp"
#include "sldp/log_mgf.hpp"

#include <functional>
#include <optional>

namespace sldp {

/// Solver settings shared by the conjugation and the nested 1D infima.
struct SolverConfig {
  double newtonTol = 1e-10;
  int maxIter = 200;
  double goldenTol = 1e-8;
  /// Unboundedness is declared once the conjugate objective exceeds
  /// 1 / infinityThreshold.
  double infinityThreshold = 1e-12;
  int hermiteNodes = 64;
};

/// A convex function with value (possibly +inf), gradient and Hessian.
using ConvexFunction = std::function<Evaluation(const Vec& t, Order order)>;

struct ConjugateResult {
  double value = kInf;
  Vec argmax;
  bool converged = false;
  int iterations = 0;
  double residual = kInf;  // ||tau - grad f(argmax)||
};

/// f*(tau) = sup_t <t, tau> - f(t) by damped Newton ascent. Steps that leave
/// the domain of f are retreated by halving. f must be finite at the start
/// point (the origin unless `warm_start` is given and finite).
ConjugateResult legendre(const ConvexFunction& f, const Vec& tau, const SolverConfig& cfg = {},
                         const std::optional<Vec>& warm_start = std::nullopt);

/// f* as a ConvexFunction: gradient = argmax, Hessian = inverse Hessian of f
/// at the argmax. Non-converged finite solves raise NumericError.
ConvexFunction conjugate_function(ConvexFunction f, SolverConfig cfg = {});

}  // namespace sldp
