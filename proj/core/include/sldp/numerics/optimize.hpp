#pragma once

#include "sldp/common.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <vector>

namespace sldp::numerics {

struct ScalarMinimum {
  double x = 0.0;
  double value = kInf;
  int iterations = 0;
  bool converged = false;
};

inline constexpr double kInvPhi = 0.6180339887498948482;

/// Golden-section search for a minimum of a unimodal f on [a, b]. Stops when
/// the bracket is narrower than tol * max(1, |x|).
template <class F>
ScalarMinimum golden_section(F&& f, double a, double b, double tol, int max_iter = 300) {
  double c = b - kInvPhi * (b - a);
  double d = a + kInvPhi * (b - a);
  double fc = f(c), fd = f(d);
  ScalarMinimum out;
  for (int it = 0; it < max_iter; ++it) {
    out.iterations = it + 1;
    if (b - a <= tol * std::max(1.0, std::abs(0.5 * (a + b)))) {
      out.converged = true;
      break;
    }
    if (fc <= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - kInvPhi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + kInvPhi * (b - a);
      fd = f(d);
    }
  }
  if (fc <= fd) {
    out.x = c;
    out.value = fc;
  } else {
    out.x = d;
    out.value = fd;
  }
  return out;
}

/// Scan f on `count` equally spaced points of [a, b] and return the bracket
/// [x_{i-1}, x_{i+1}] around the smallest sampled value, with the index.
template <class F>
std::pair<std::pair<double, double>, int> scan_bracket(F&& f, double a, double b, int count) {
  std::vector<double> xs(count), fs(count);
  for (int i = 0; i < count; ++i) {
    xs[i] = a + (b - a) * i / (count - 1);
    fs[i] = f(xs[i]);
  }
  const int best = static_cast<int>(std::min_element(fs.begin(), fs.end()) - fs.begin());
  const int lo = std::max(0, best - 1), hi = std::min(count - 1, best + 1);
  return {{xs[lo], xs[hi]}, best};
}

struct NelderMeadOptions {
  double step = 0.5;
  double f_tol = 1e-11;
  double x_tol = 1e-5;
  int max_evaluations = 600;
};

struct NelderMeadResult {
  Vec x;
  double value = kInf;
  int evaluations = 0;
  bool converged = false;
};

/// Derivative-free simplex minimization (standard reflection/expansion/
/// contraction/shrink coefficients 1, 2, 1/2, 1/2). f may return +inf.
inline NelderMeadResult nelder_mead(const std::function<double(const Vec&)>& f, const Vec& x0,
                                    const NelderMeadOptions& opt = {}) {
  const int m = static_cast<int>(x0.size());
  std::vector<Vec> pts(m + 1, x0);
  std::vector<double> vals(m + 1);
  NelderMeadResult out;
  auto eval = [&](const Vec& x) {
    ++out.evaluations;
    return f(x);
  };
  for (int i = 0; i < m; ++i) pts[i + 1](i) += opt.step;
  for (int i = 0; i <= m; ++i) vals[i] = eval(pts[i]);

  std::vector<int> order(m + 1);
  while (out.evaluations < opt.max_evaluations) {
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int a, int b) { return vals[a] < vals[b]; });
    const int best = order.front(), worst = order.back(), second = order[m - 1];

    double diameter = 0.0;
    for (int i = 0; i <= m; ++i) diameter = std::max(diameter, (pts[i] - pts[best]).norm());
    const double spread = vals[worst] - vals[best];
    if (std::isfinite(vals[best]) && spread <= opt.f_tol * (1.0 + std::abs(vals[best])) &&
        diameter <= opt.x_tol) {
      out.converged = true;
      break;
    }

    Vec centroid = Vec::Zero(m);
    for (int i = 0; i <= m; ++i)
      if (i != worst) centroid += pts[i];
    centroid /= m;

    const Vec xr = centroid + (centroid - pts[worst]);
    const double fr = eval(xr);
    if (fr < vals[best]) {
      const Vec xe = centroid + 2.0 * (centroid - pts[worst]);
      const double fe = eval(xe);
      if (fe < fr) {
        pts[worst] = xe;
        vals[worst] = fe;
      } else {
        pts[worst] = xr;
        vals[worst] = fr;
      }
      continue;
    }
    if (fr < vals[second]) {
      pts[worst] = xr;
      vals[worst] = fr;
      continue;
    }
    const bool outside = fr < vals[worst];
    const Vec xc = outside ? Vec(centroid + 0.5 * (xr - centroid))
                           : Vec(centroid + 0.5 * (pts[worst] - centroid));
    const double fcon = eval(xc);
    if (fcon < (outside ? fr : vals[worst])) {
      pts[worst] = xc;
      vals[worst] = fcon;
      continue;
    }
    for (int i = 0; i <= m; ++i) {
      if (i == best) continue;
      pts[i] = pts[best] + 0.5 * (pts[i] - pts[best]);
      vals[i] = eval(pts[i]);
    }
  }
  const int best = static_cast<int>(std::min_element(vals.begin(), vals.end()) - vals.begin());
  out.x = pts[best];
  out.value = vals[best];
  return out;
}

}  // namespace sldp::numerics
