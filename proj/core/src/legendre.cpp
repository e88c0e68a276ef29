#include "sldp/legendre.hpp"

#include <Eigen/Cholesky>

#include <cmath>

namespace sldp {

namespace {

constexpr double kArmijo = 1e-4;
constexpr double kRetreat = 0.5;
constexpr int kMaxRetreats = 1100;  // enough to shrink any finite step to zero
constexpr int kMaxBacktracks = 60;

Vec newton_direction(const Mat& h, const Vec& g) {
  const double scale = std::max(1.0, h.diagonal().cwiseAbs().maxCoeff());
  Mat reg = h;
  for (double lambda = 1e-12 * scale;; lambda *= 100.0) {
    reg.diagonal() = h.diagonal().array() + lambda;
    Eigen::LDLT<Mat> ldlt(reg);
    if (ldlt.info() == Eigen::Success && ldlt.isPositive()) {
      Vec d = ldlt.solve(g);
      if (d.allFinite() && g.dot(d) > 0.0) return d;
    }
    if (lambda > 1e12 * scale) return g;  // fall back to the gradient
  }
}

}  // namespace

ConjugateResult legendre(const ConvexFunction& f, const Vec& tau, const SolverConfig& cfg,
                         const std::optional<Vec>& warm_start) {
  const int m = static_cast<int>(tau.size());
  const double tol_scale = 1.0 + tau.norm();
  const double big = 1.0 / cfg.infinityThreshold;

  Vec t = Vec::Zero(m);
  Evaluation e;
  if (warm_start && warm_start->size() == m) {
    e = f(*warm_start, Order::Hessian);
    if (std::isfinite(e.value)) t = *warm_start;
  }
  if (t.isZero(0.0)) {
    e = f(t, Order::Hessian);
  } else {
    // Keep the origin when the warm start is worse than it.
    Evaluation e0 = f(Vec::Zero(m), Order::Hessian);
    if (std::isfinite(e0.value) && -e0.value > t.dot(tau) - e.value) {
      t.setZero();
      e = std::move(e0);
    }
  }
  if (!std::isfinite(e.value)) throw DomainError("legendre: f must be finite at the start point");

  ConjugateResult out;
  double obj = t.dot(tau) - e.value;
  for (int it = 0; it <= cfg.maxIter; ++it) {
    out.iterations = it;
    const Vec g = tau - e.grad;
    const double res = g.norm();
    out.residual = res;
    if (res <= cfg.newtonTol * tol_scale) {
      out.converged = true;
      break;
    }
    if (it == cfg.maxIter) break;

    const Vec d = newton_direction(e.hess, g);
    const double slope = g.dot(d);
    double alpha = 1.0;
    bool accepted = false;
    int backtracks = 0;
    for (int h = 0; h < kMaxRetreats && backtracks < kMaxBacktracks; ++h, alpha *= kRetreat) {
      const Vec trial = t + alpha * d;
      if (trial == t) break;
      Evaluation et;
      try {
        et = f(trial, Order::Hessian);
      } catch (const NumericError&) {
        continue;  // quadrature breakdown far from the iterate: retreat as well
      }
      if (!std::isfinite(et.value)) continue;  // left the domain: retreat
      const double trial_obj = trial.dot(tau) - et.value;
      if (trial_obj > big) {
        out.value = kInf;
        out.argmax = trial;
        out.converged = false;
        out.iterations = it + 1;
        return out;
      }
      if (trial_obj >= obj + kArmijo * alpha * slope) {
        t = trial;
        e = std::move(et);
        obj = trial_obj;
        accepted = true;
        break;
      }
      ++backtracks;
    }
    if (!accepted) {
      // No ascent possible in floating point. Accept when the predicted gain
      // (half the Newton decrement) is below the value resolution.
      out.converged = res <= 1e-8 * tol_scale || 0.5 * slope <= 1e-10 * (1.0 + std::abs(obj));
      break;
    }
  }
  out.value = obj;
  out.argmax = t;
  return out;
}

ConvexFunction conjugate_function(ConvexFunction f, SolverConfig cfg) {
  return [f = std::move(f), cfg](const Vec& tau, Order order) {
    const ConjugateResult r = legendre(f, tau, cfg);
    Evaluation out{r.value, {}, {}};
    if (!std::isfinite(r.value)) return out;
    if (!r.converged) throw NumericError("conjugate_function: Newton solve did not converge", r.value);
    if (order >= Order::Gradient) out.grad = r.argmax;
    if (order >= Order::Hessian) out.hess = f(r.argmax, Order::Hessian).hess.inverse();
    return out;
  };
}

}  // namespace sldp
