#include "sldp/variational.hpp"

#include "sldp/numerics/optimize.hpp"

#include <Eigen/Householder>

#include <cmath>
#include <map>

namespace sldp {

Mat aligned_rotation(const Vec& v) {
  const int k = static_cast<int>(v.size());
  if (v.norm() == 0.0) return Mat::Identity(k, k);
  // Householder reflector mapping e1 to v / ||v||.
  Vec e = Vec::Zero(k);
  e(0) = 1.0;
  const Vec w = v.normalized() - e;
  if (w.norm() < 1e-15) return Mat::Identity(k, k);
  const Vec h = w.normalized();
  return Mat::Identity(k, k) - 2.0 * h * h.transpose();
}

namespace {

Mat covariance_from(const Mat& rot, const Vec& lambda) {
  Mat s = rot * lambda.array().exp().matrix().asDiagonal() * rot.transpose();
  return 0.5 * (s + s.transpose());
}

Vec clamp_nonpositive(const Vec& u) { return u.cwiseMin(0.0); }

numerics::NelderMeadOptions nm_options(const GaussianSearch& s) {
  numerics::NelderMeadOptions o;
  o.step = s.step;
  o.f_tol = s.fTol;
  o.x_tol = s.xTol;
  o.max_evaluations = s.maxEvaluations;
  return o;
}

// Best of several Nelder-Mead runs from u = start * (1, ..., 1).
template <class F>
numerics::NelderMeadResult multi_start(F&& objective, int k, const GaussianSearch& search,
                                       int& evaluations) {
  numerics::NelderMeadResult best;
  best.value = kInf;
  bool any = false;
  for (double s : search.starts) {
    auto r = numerics::nelder_mead(objective, Vec::Constant(k, s), nm_options(search));
    evaluations += r.evaluations;
    if (!any || r.value < best.value) {
      best = r;
      any = true;
    }
  }
  return best;
}

}  // namespace

VariationalResult variational_rhs(const MeasureFamily& family, const Vec& x,
                                  const GaussianSearch& search) {
  const int k = static_cast<int>(x.size());
  if (k < 1) throw ValidationError("variational_rhs needs k >= 1");
  VariationalResult out;
  out.jan = j_annealed(family, x, search.solver).value;
  out.jqu_standard = j_quenched(family, NuSpec::standard(k), x, search.solver).value;

  // For nu = N(0, S), <t1, X> has the law of ||S^{1/2} t1|| Z, hence
  // J^qu_nu(x) = J^qu_{gamma, k=1}(||S^{-1/2} x||). Radii are cached because
  // the simplex revisits them whenever only the trailing eigenvalues move.
  std::map<double, double> cache;
  auto j_radius = [&](double radius) {
    auto it = cache.find(radius);
    if (it != cache.end()) return it->second;
    const double v = j_quenched(family, NuSpec::standard(1), Vec::Constant(1, radius), search.solver).value;
    cache.emplace(radius, v);
    return v;
  };

  const Mat rot = aligned_rotation(x);
  auto objective = [&](const Vec& u) {
    const Vec lambda = clamp_nonpositive(u);
    const GaussianMeasure nu = GaussianMeasure::centered(covariance_from(rot, lambda));
    const double h = hk_gaussian(nu);
    if (!std::isfinite(h)) return kInf;
    const Vec z = rot.transpose() * x;
    const double radius = std::sqrt((z.array().square() * (-lambda.array()).exp()).sum());
    return j_radius(radius) + h;
  };

  const auto best = multi_start(objective, k, search, out.evaluations);
  const Vec lambda = clamp_nonpositive(best.x);
  out.rhs_upper = best.value;
  out.sigma2 = lambda.array().exp();
  out.argmin = GaussianMeasure::centered(covariance_from(rot, lambda));
  out.converged = best.converged;
  return out;
}

PhiResult phi_eval(const MeasureFamily& family, const Vec& t1, double t2,
                   const GaussianSearch& search) {
  const int k = static_cast<int>(t1.size());
  if (k < 1) throw ValidationError("phi_eval needs k >= 1");
  if (!(t2 < family.domain_bound())) throw ValidationError("phi_eval needs t2 < T");
  PhiResult out;
  const Mat rot = aligned_rotation(t1);
  auto objective = [&](const Vec& u) {
    const Vec lambda = clamp_nonpositive(u);
    const GaussianMeasure nu = GaussianMeasure::centered(covariance_from(rot, lambda));
    const double h = hk_gaussian(nu);
    if (!std::isfinite(h)) return kInf;
    return -(psi_eval(NuSpec::gaussian(nu), family, t1, t2) - h);
  };
  const auto best = multi_start(objective, k, search, out.evaluations);
  const Vec lambda = clamp_nonpositive(best.x);
  out.lower = -best.value;
  out.sigma2 = lambda.array().exp();
  out.argmax = GaussianMeasure::centered(covariance_from(rot, lambda));
  out.converged = best.converged;
  return out;
}

ReducedEntropy reduced_entropy(const GaussianMeasure& nu, const GaussianSearch& search) {
  const int k = nu.dim();
  auto objective = [&](const Vec& v) {
    SymMatrix m(k);
    for (int i = 0; i < k; ++i) m.set(i, i, std::exp(v(i)));
    const Mat g = gamma_map(m);
    return jk_gaussian(gaussian_pushforward(nu, g), m);
  };
  int evaluations = 0;
  GaussianSearch s = search;
  s.starts = {0.0, -0.3, 0.3};
  const auto best = multi_start(objective, k, s, evaluations);
  ReducedEntropy out;
  out.value = best.value;
  out.m_diag = best.x.array().exp();
  out.converged = best.converged;
  return out;
}

}  // namespace sldp
