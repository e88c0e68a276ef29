#include "sldp/psi.hpp"

#include "sldp/numerics/hermite.hpp"

#include <cmath>

namespace sldp {

int NuSpec::dim() const {
  return is_gaussian() ? as_gaussian().dim() : as_discrete().dim();
}

Psi::Psi(MeasureFamily family, NuSpec nu, int hermite_nodes)
    : family_(family), nu_(std::move(nu)), nodes_(hermite_nodes) {
  if (hermite_nodes < 2) throw ValidationError("Psi needs at least two Hermite nodes");
}

Evaluation Psi::evaluate(const Vec& t1, double t2, Order order) const {
  if (t1.size() != dim()) throw ValidationError("Psi: t1 has the wrong dimension");
  if (t2 >= family_.domain_bound()) return Evaluation{kInf, {}, {}};
  return nu_.is_gaussian() ? evaluate_gaussian(t1, t2, order) : evaluate_discrete(t1, t2, order);
}

Evaluation Psi::evaluate_discrete(const Vec& t1, double t2, Order order) const {
  const auto& m = nu_.as_discrete();
  const int k = dim();
  Evaluation out{0.0, {}, {}};
  if (order >= Order::Gradient) out.grad = Vec::Zero(k + 1);
  if (order >= Order::Hessian) out.hess = Mat::Zero(k + 1, k + 1);
  for (int i = 0; i < m.size(); ++i) {
    const double w = m.weights()(i);
    if (w == 0.0) continue;
    const Vec x = m.points().row(i).transpose();
    const Evaluation e = lambda_full(family_, t1.dot(x), t2, order);
    out.value += w * e.value;
    if (order >= Order::Gradient) {
      out.grad.head(k) += w * e.grad(0) * x;
      out.grad(k) += w * e.grad(1);
    }
    if (order >= Order::Hessian) {
      out.hess.topLeftCorner(k, k) += w * e.hess(0, 0) * x * x.transpose();
      out.hess.col(k).head(k) += w * e.hess(0, 1) * x;
      out.hess(k, k) += w * e.hess(1, 1);
    }
  }
  if (order >= Order::Hessian) out.hess.row(k).head(k) = out.hess.col(k).head(k).transpose();
  return out;
}

// <t1, X> ~ N(mu, s^2) with mu = <t1, m>, s^2 = t1' S t1. Derivatives use
// E[X | <t1,X> = mu + s z] = m + c z / s with c = S t1, and
// Cov[X | <t1,X>] = S - c c' / s^2.
Evaluation Psi::evaluate_gaussian(const Vec& t1, double t2, Order order) const {
  const auto& g = nu_.as_gaussian();
  const int k = dim();
  const Vec& mean = g.mean();
  const Mat& cov = g.cov();
  const double mu = t1.dot(mean);
  const Vec c = cov * t1;
  const double s2 = t1.dot(c);

  Evaluation out{0.0, {}, {}};
  if (order >= Order::Gradient) out.grad = Vec::Zero(k + 1);
  if (order >= Order::Hessian) out.hess = Mat::Zero(k + 1, k + 1);

  if (!(s2 > 1e-300)) {
    const Evaluation e = lambda_full(family_, mu, t2, order);
    out.value = e.value;
    if (order >= Order::Gradient) {
      out.grad.head(k) = e.grad(0) * mean;
      out.grad(k) = e.grad(1);
    }
    if (order >= Order::Hessian) {
      out.hess.topLeftCorner(k, k) = e.hess(0, 0) * (cov + mean * mean.transpose());
      out.hess.col(k).head(k) = e.hess(0, 1) * mean;
      out.hess.row(k).head(k) = out.hess.col(k).head(k).transpose();
      out.hess(k, k) = e.hess(1, 1);
    }
    return out;
  }

  const double s = std::sqrt(s2);
  const auto& rule = numerics::hermite_rule(nodes_);
  const int n = static_cast<int>(rule.nodes.size());

  // Accumulated 1D moments against the Hermite weights.
  double e0 = 0, e1 = 0, e1z = 0, e2 = 0, e11 = 0, e11z = 0, e11zz = 0, e12 = 0, e12z = 0, e22 = 0;
  auto add = [&](double w, double z, const Evaluation& e, double sign1) {
    e0 += w * e.value;
    if (order >= Order::Gradient) {
      const double l1 = sign1 * e.grad(0);
      e1 += w * l1;
      e1z += w * l1 * z;
      e2 += w * e.grad(1);
    }
    if (order >= Order::Hessian) {
      const double l11 = e.hess(0, 0), l12 = sign1 * e.hess(0, 1);
      e11 += w * l11;
      e11z += w * l11 * z;
      e11zz += w * l11 * z * z;
      e12 += w * l12;
      e12z += w * l12 * z;
      e22 += w * e.hess(1, 1);
    }
  };

  if (mu == 0.0) {
    // Lambda is even in s1: pair the symmetric nodes and evaluate once.
    for (int j = n / 2; j < n; ++j) {
      const double z = rule.nodes[j];
      const Evaluation e = lambda_full(family_, s * z, t2, order);
      add(rule.weights[j], z, e, 1.0);
      if (z != 0.0) add(rule.weights[n - 1 - j], -z, e, -1.0);
    }
  } else {
    for (int j = 0; j < n; ++j) {
      const double z = rule.nodes[j];
      add(rule.weights[j], z, lambda_full(family_, mu + s * z, t2, order), 1.0);
    }
  }

  out.value = e0;
  if (order >= Order::Gradient) {
    out.grad.head(k) = e1 * mean + (e1z / s) * c;
    out.grad(k) = e2;
  }
  if (order >= Order::Hessian) {
    const Mat residual = cov - c * c.transpose() / s2;
    Mat h = e11 * (mean * mean.transpose() + residual);
    h += (e11z / s) * (mean * c.transpose() + c * mean.transpose());
    h += (e11zz / s2) * (c * c.transpose());
    out.hess.topLeftCorner(k, k) = 0.5 * (h + h.transpose());
    out.hess.col(k).head(k) = e12 * mean + (e12z / s) * c;
    out.hess.row(k).head(k) = out.hess.col(k).head(k).transpose();
    out.hess(k, k) = e22;
  }
  return out;
}

double psi_eval(const NuSpec& nu, const MeasureFamily& family, const Vec& t1, double t2) {
  Psi psi(family, nu, kMinHermiteNodes);
  double v = psi(t1, t2);
  if (!nu.is_gaussian() || !std::isfinite(v)) return v;
  for (int nodes = 2 * kMinHermiteNodes; nodes <= kMaxHermiteNodes; nodes *= 2) {
    psi.set_hermite_nodes(nodes);
    const double w = psi(t1, t2);
    const bool done = std::abs(w - v) < 1e-10;
    v = w;
    if (done) break;
  }
  return v;
}

}  // namespace sldp
