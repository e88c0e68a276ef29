#include "sldp/rates.hpp"

#include "sldp/numerics/optimize.hpp"
#include "sldp/samplers.hpp"

#include <boost/math/special_functions/gamma.hpp>

#include <cmath>

namespace sldp {

namespace {

// tau-bracket [max(eps, m_r - 6 sd_r), m_r + 6 sd_r], widened while the
// minimizer sits on an endpoint.
template <class F>
numerics::ScalarMinimum minimize_over_tau(F&& objective, const MeasureFamily& family,
                                          const SolverConfig& cfg) {
  double lo = std::max(1e-6, family.mean_r() - 6.0 * family.sd_r());
  double hi = family.mean_r() + 6.0 * family.sd_r();
  numerics::ScalarMinimum best;
  int total = 0;
  for (int widen = 0; widen < 8; ++widen) {
    best = numerics::golden_section(objective, lo, hi, cfg.goldenTol);
    total += best.iterations;
    const double span = hi - lo;
    if (best.x > hi - 1e-3 * span) {
      lo = hi - 0.5 * span;
      hi *= 4.0;
    } else if (best.x < lo + 1e-3 * span && lo > 1e-12) {
      hi = lo + 0.5 * span;
      lo *= 1e-3;
    } else {
      break;
    }
  }
  best.iterations = total;
  return best;
}

bool competes(double unconverged, double final_value) {
  return unconverged <= final_value + 1e-9 * (1.0 + std::abs(final_value));
}

// Restricts an evaluation in (t1, t2) to the t1 block.
Evaluation first_block(Evaluation e, int k) {
  if (e.grad.size() > 0) e.grad = Vec(e.grad.head(k));
  if (e.hess.size() > 0) e.hess = Mat(e.hess.topLeftCorner(k, k));
  return e;
}

}  // namespace

ConjugateResult psi_conjugate(const Psi& psi, const Vec& tau1, double tau2,
                              const SolverConfig& cfg, const std::optional<Vec>& warm_start) {
  const int k = psi.dim();
  if (tau1.size() != k) throw ValidationError("psi_conjugate: dimension mismatch");
  if (psi.family().r_is_one()) {
    // Psi(t1, t2) = Psi(t1, 0) + t2, so the sup is +inf unless tau2 = 1.
    if (tau2 != 1.0) return ConjugateResult{kInf, Vec::Zero(k + 1), true, 0, 0.0};
    ConvexFunction f = [&](const Vec& t1, Order order) {
      return first_block(psi.evaluate(t1, 0.0, order), k);
    };
    std::optional<Vec> warm;
    if (warm_start) warm = Vec(warm_start->head(k));
    ConjugateResult r = legendre(f, tau1, cfg, warm);
    Vec full = Vec::Zero(k + 1);
    full.head(k) = r.argmax;
    r.argmax = full;
    return r;
  }
  ConvexFunction f = [&](const Vec& t, Order order) {
    return psi.evaluate(t.head(k), t(k), order);
  };
  Vec tau(k + 1);
  tau << tau1, tau2;
  return legendre(f, tau, cfg, warm_start);
}

RateResult j_quenched(const MeasureFamily& family, const NuSpec& nu, const Vec& x,
                      const SolverConfig& cfg) {
  if (x.size() != nu.dim()) throw ValidationError("j_quenched: x has the wrong dimension");
  Psi psi(family, nu, cfg.hermiteNodes);

  // Cone and ball with p >= 2: by Hoelder, <a, X> / sqrt(n) <= ||a||_q n^{1/p - 1/2}
  // with q = p / (p - 1); for frames whose rows follow N(0, S) this tends to
  // ||S^{1/2} u||_2 (E|Z|^q)^{1/q} in direction u, so the rate is infinite once
  // ||S^{-1/2} x|| reaches (E|Z|^q)^{1/q}.
  if (!family.r_is_one() && family.p() >= 2.0 && nu.is_gaussian() &&
      nu.as_gaussian().mean().isZero(0.0)) {
    const double q = family.p() / (family.p() - 1.0);
    const double reach = std::exp((0.5 * q * std::log(2.0) + boost::math::lgamma(0.5 * (q + 1.0)) -
                                   0.5 * std::log(M_PI)) / q);
    Eigen::LDLT<Mat> ldlt(nu.as_gaussian().cov());
    const Vec sx = ldlt.solve(x);
    const double radius = std::sqrt(std::max(0.0, x.dot(sx)));
    if (ldlt.info() == Eigen::Success && sx.allFinite() && radius >= reach) {
      return RateResult{kInf, true, 1.0, Vec::Zero(x.size() + 1), 0};
    }
  }

  if (family.r_is_one()) {
    auto r = psi_conjugate(psi, x, 1.0, cfg);
    if (nu.is_gaussian() && std::isfinite(r.value)) {
      // Refine the Hermite rule at the maximizer and re-solve if it moved.
      for (int nodes = 2 * cfg.hermiteNodes; nodes <= kMaxHermiteNodes; nodes *= 2) {
        const double before = psi(r.argmax.head(x.size()), 0.0);
        psi.set_hermite_nodes(nodes);
        const double after = psi(r.argmax.head(x.size()), 0.0);
        if (std::abs(after - before) < 1e-10) break;
        r = psi_conjugate(psi, x, 1.0, cfg, r.argmax);
      }
    }
    return RateResult{r.value, r.converged, 1.0, r.argmax, r.iterations};
  }

  const double p = family.p();
  std::optional<Vec> warm;
  // An unconverged inner sup underestimates; it can mislead the outer search
  // only when it competes with the final minimum.
  double unconverged_min = kInf;
  auto objective = [&](double tau) {
    const Vec y = x * std::pow(tau, 1.0 / p);
    const auto r = psi_conjugate(psi, y, tau, cfg, warm);
    if (std::isfinite(r.value)) {
      warm = r.argmax;
      if (!r.converged) unconverged_min = std::min(unconverged_min, r.value);
    }
    return r.value;
  };
  const auto best = minimize_over_tau(objective, family, cfg);

  // Final solve at the minimizer, refining the Hermite rule for Gaussian nu.
  auto final_solve = [&] {
    return psi_conjugate(psi, x * std::pow(best.x, 1.0 / p), best.x, cfg, warm);
  };
  ConjugateResult r = final_solve();
  if (nu.is_gaussian() && std::isfinite(r.value)) {
    for (int nodes = 2 * cfg.hermiteNodes; nodes <= kMaxHermiteNodes; nodes *= 2) {
      const Vec& t = r.argmax;
      const double before = psi(t.head(x.size()), t(x.size()));
      psi.set_hermite_nodes(nodes);
      const double after = psi(t.head(x.size()), t(x.size()));
      if (std::abs(after - before) < 1e-10) break;
      warm = r.argmax;
      r = final_solve();
    }
  }
  return RateResult{r.value, r.converged && best.converged && !competes(unconverged_min, r.value), best.x, r.argmax,
                    best.iterations};
}

ConjugateResult lambda_bar_conjugate(const MeasureFamily& family, double tau1, double tau2,
                                     const SolverConfig& cfg,
                                     const std::optional<Vec>& warm_start) {
  if (family.r_is_one()) {
    if (tau2 != 1.0) return ConjugateResult{kInf, Vec::Zero(2), true, 0, 0.0};
    ConvexFunction f = [&](const Vec& s, Order order) {
      return first_block(lambda_bar_full(family, s(0), 0.0, order), 1);
    };
    std::optional<Vec> warm;
    if (warm_start) warm = Vec(warm_start->head(1));
    ConjugateResult r = legendre(f, Vec::Constant(1, tau1), cfg, warm);
    r.argmax = Vec{{r.argmax(0), 0.0}};
    return r;
  }
  const double p = family.p();
  const double t_bound = family.domain_bound();
  if (p == 2.0) {
    // Lambda-bar depends on s1 + s2 only: finite conjugate only on the diagonal.
    if (tau1 != tau2 || !(tau1 > 0.0)) return ConjugateResult{kInf, Vec::Zero(2), true, 0, 0.0};
    const double sigma = 0.5 * (1.0 - 1.0 / tau1);
    return ConjugateResult{0.5 * (tau1 - 1.0 - std::log(tau1)), Vec{{sigma, 0.0}}, true, 0, 0.0};
  }
  if (p > 2.0 && tau1 > 0.0) {
    // Lambda-bar stays finite on the face s2 = T (s1 < 0), where it is the
    // Gaussian integral 0.5 log(pi / -s1) - log Z. The face maximizer
    // s1 = -1 / (2 tau1) is the global one when the outward s2-slope
    // tau2 - E|N(0, tau1)|^p is nonnegative.
    const double gauss_moment = std::exp(0.5 * p * std::log(2.0 * tau1) +
                                         boost::math::lgamma(0.5 * (p + 1.0)) -
                                         0.5 * std::log(M_PI));
    if (tau2 >= gauss_moment) {
      const double value = -0.5 + t_bound * tau2 - 0.5 * std::log(2.0 * M_PI * tau1) +
                           p_normal_log_normalizer(p);
      return ConjugateResult{value, Vec{{-0.5 / tau1, t_bound}}, true, 0, 0.0};
    }
  }
  ConvexFunction f = [&](const Vec& s, Order order) {
    return lambda_bar_full(family, s(0), s(1), order);
  };
  ConjugateResult r = legendre(f, Vec{{tau1, tau2}}, cfg, warm_start);
  if ((r.converged || !std::isfinite(r.value)) && r.value >= 0.0) return r;

  // Newton stalls when the maximizer sits near the non-steep face s2 = T.
  // The partial maximum over s1 is concave in s2, so search s2 <= T directly.
  std::optional<Vec> inner_warm;
  bool inner_ok = true;
  auto neg_partial = [&](double s2) {
    ConvexFunction g = [&](const Vec& s1, Order order) {
      return first_block(lambda_bar_full(family, s1(0), s2, order), 1);
    };
    const ConjugateResult in = legendre(g, Vec::Constant(1, tau1), cfg, inner_warm);
    if (!std::isfinite(in.value)) return -kInf;
    inner_warm = in.argmax;
    inner_ok = inner_ok && in.converged;
    return -(in.value + s2 * tau2);
  };
  double lo = t_bound - 2.0, hi = t_bound - 1e-12;
  numerics::ScalarMinimum best;
  for (int widen = 0; widen < 12; ++widen) {
    best = numerics::golden_section(neg_partial, lo, hi, cfg.goldenTol);
    if (best.x > lo + 1e-3 * (hi - lo)) break;
    hi = lo + 0.5 * (hi - lo);
    lo -= 4.0 * (t_bound - lo);
  }
  const double value = -neg_partial(best.x);
  if (std::isfinite(value) && value > r.value) {
    r.value = value;
    r.argmax = Vec{{inner_warm ? (*inner_warm)(0) : 0.0, best.x}};
    r.converged = best.converged && inner_ok;
  }
  return r;
}

RateResult j_x(const MeasureFamily& family, double y, const SolverConfig& cfg) {
  if (!(y >= 0.0)) throw ValidationError("j_x needs y >= 0");
  if (family.p() < 2.0) {
    throw DomainError("J_X needs Lambda-bar finite near the origin, which fails for p < 2");
  }
  if (y == 0.0) return RateResult{kInf, true, 1.0, Vec::Zero(2), 0};
  if (!std::isfinite(y)) return RateResult{kInf, true, 1.0, Vec::Zero(2), 0};

  // On the cone and ball with p >= 2 the power-mean inequality gives
  // (1/n) sum X_i^2 <= ((1/n) sum |X_i|^p)^{2/p} <= 1, so y >= 1 has
  // infinite rate (equality needs all |X_i| equal).
  if (!family.r_is_one() && family.p() >= 2.0 && y >= 1.0) {
    return RateResult{kInf, true, 1.0, Vec::Zero(2), 0};
  }

  if (family.r_is_one()) {
    const auto r = lambda_bar_conjugate(family, y * y, 1.0, cfg);
    return RateResult{r.value, r.converged, 1.0, r.argmax, r.iterations};
  }
  const double p = family.p();
  std::optional<Vec> warm;
  double unconverged_min = kInf;
  auto objective = [&](double t2) {
    const auto r = lambda_bar_conjugate(family, y * y * std::pow(t2, 2.0 / p), t2, cfg, warm);
    if (std::isfinite(r.value)) {
      warm = r.argmax;
      if (!r.converged) unconverged_min = std::min(unconverged_min, r.value);
    }
    return r.value;
  };
  const auto best = minimize_over_tau(objective, family, cfg);
  const auto r = lambda_bar_conjugate(family, y * y * std::pow(best.x, 2.0 / p), best.x, cfg, warm);
  return RateResult{r.value, r.converged && best.converged && !competes(unconverged_min, r.value), best.x, r.argmax,
                    best.iterations};
}

RateResult j_annealed(const MeasureFamily& family, const Vec& x, const SolverConfig& cfg) {
  const double norm = x.norm();
  if (norm == 0.0) return RateResult{0.0, true, 0.0, Vec::Zero(2), 0};

  // c = logistic(u) keeps the search unconstrained and resolves both ends.
  auto c_of = [](double u) { return 1.0 / (1.0 + std::exp(-u)); };
  auto objective = [&](double u) {
    const double c = c_of(u);
    const auto jx = j_x(family, norm / c, cfg);
    // log(1 - c^2) = log((1 - c)(1 + c)) with 1 - c = logistic(-u)
    return jx.value - 0.5 * (std::log(c_of(-u)) + std::log1p(c));
  };
  // c below min(1e-3, 1e-3 ||x||) would probe J_X at absurdly large radii.
  const double c_lo = std::min(1e-3, 1e-3 * norm);
  const double u_lo = std::log(c_lo / (1.0 - c_lo));
  const auto [bracket, idx] = numerics::scan_bracket(objective, u_lo, 30.0, 25);
  (void)idx;
  const auto best = numerics::golden_section(objective, bracket.first, bracket.second, cfg.goldenTol);
  const double c = c_of(best.x);
  const auto jx = j_x(family, norm / c, cfg);
  return RateResult{best.value, best.converged && jx.converged, c, jx.argmax,
                    best.iterations};
}

}  // namespace sldp
