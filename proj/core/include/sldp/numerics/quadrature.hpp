#pragma once

#include <Eigen/Core>

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <span>
#include <vector>

namespace sldp::numerics {

template <int M>
using Vector = Eigen::Matrix<double, M, 1>;

template <int M>
struct QuadratureResult {
  Vector<M> value = Vector<M>::Zero();
  Vector<M> l1 = Vector<M>::Zero();     // integral of |f|, per component
  Vector<M> error = Vector<M>::Zero();  // |Kronrod - Gauss| summed over panels
  bool converged = false;
  int panels = 0;
};

namespace detail {

// 21-point Kronrod extension of the 10-point Gauss rule (QUADPACK qk21).
inline constexpr std::array<double, 11> kXgk = {
    0.995657163025808080735527280689003, 0.973906528517171720077964012084452,
    0.930157491355708226001207180059508, 0.865063366688984510732096688423493,
    0.780817726586416897063717578345042, 0.679409568299024406234327365114874,
    0.562757134668604683339000099272694, 0.433395394129247190799265943165784,
    0.294392862701460198131126603103866, 0.148874338981631210884826001129720,
    0.000000000000000000000000000000000};
inline constexpr std::array<double, 11> kWgk = {
    0.011694638867371874278064396062192, 0.032558162307964727478818972459390,
    0.054755896574351996031381300244580, 0.075039674810919952767043140916190,
    0.093125454583697605535065465083366, 0.109387158802297641899210590325805,
    0.123491976262065851077600525329874, 0.134709217311473325928054001771707,
    0.142775938577060080797094273138717, 0.147739104901338491374841515972068,
    0.149445554002916905664936468389821};
// Gauss weights for kXgk[1], kXgk[3], ..., kXgk[9].
inline constexpr std::array<double, 5> kWg = {
    0.066671344308688137593568809893332, 0.149451349150580593145776339657697,
    0.219086362515982043995534934228163, 0.269266719309996355091226921569469,
    0.295524224714752870173892994651338};

template <int M>
struct Panel {
  double a, b;
  Vector<M> value, l1, error;
};

template <int M, class F>
Panel<M> gk21(const F& f, double a, double b) {
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  std::array<Vector<M>, 21> fv;
  fv[20] = f(center);
  for (int j = 0; j < 10; ++j) {
    const double dx = half * kXgk[j];
    fv[2 * j] = f(center - dx);
    fv[2 * j + 1] = f(center + dx);
  }
  Vector<M> kronrod = kWgk[10] * fv[20];
  Vector<M> l1 = kWgk[10] * fv[20].cwiseAbs();
  Vector<M> gauss = Vector<M>::Zero();
  for (int j = 0; j < 10; ++j) {
    kronrod += kWgk[j] * (fv[2 * j] + fv[2 * j + 1]);
    l1 += kWgk[j] * (fv[2 * j].cwiseAbs() + fv[2 * j + 1].cwiseAbs());
    if (j % 2 == 1) gauss += kWg[j / 2] * (fv[2 * j] + fv[2 * j + 1]);
  }
  // QUADPACK error heuristic: scale |K - G| against the mean deviation and
  // floor it at the roundoff level.
  const Vector<M> mean = 0.5 * kronrod;
  Vector<M> asc = kWgk[10] * (fv[20] - mean).cwiseAbs();
  for (int j = 0; j < 10; ++j) {
    asc += kWgk[j] * ((fv[2 * j] - mean).cwiseAbs() + (fv[2 * j + 1] - mean).cwiseAbs());
  }
  const double h = std::abs(half);
  Vector<M> err = ((kronrod - gauss) * half).cwiseAbs();
  for (int c = 0; c < M; ++c) {
    const double resasc = asc(c) * h;
    if (resasc != 0.0 && err(c) != 0.0) {
      err(c) = resasc * std::min(1.0, std::pow(200.0 * err(c) / resasc, 1.5));
    }
    err(c) = std::max(err(c), 50.0 * std::numeric_limits<double>::epsilon() * l1(c) * h);
  }
  return Panel<M>{a, b, kronrod * half, l1 * h, err};
}

}  // namespace detail

/// Globally adaptive Gauss-Kronrod (21-point) quadrature of a vector-valued
/// integrand over [breaks.front(), breaks.back()], with the interior breaks
/// used as initial panel boundaries. Component c has converged when its error
/// estimate is at most max(abs_tol, rel_tol * integral of |f_c|).
template <int M, class F>
QuadratureResult<M> integrate_adaptive(const F& f, std::span<const double> breaks,
                                       double rel_tol, double abs_tol,
                                       int max_panels = 4000) {
  std::vector<detail::Panel<M>> panels;
  for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
    if (breaks[i + 1] > breaks[i]) panels.push_back(detail::gk21<M>(f, breaks[i], breaks[i + 1]));
  }
  QuadratureResult<M> out;
  if (panels.empty()) {
    out.converged = true;
    return out;
  }
  for (;;) {
    Vector<M> value = Vector<M>::Zero(), l1 = Vector<M>::Zero(), err = Vector<M>::Zero();
    for (const auto& p : panels) {
      value += p.value;
      l1 += p.l1;
      err += p.error;
    }
    Vector<M> budget;
    for (int c = 0; c < M; ++c) budget(c) = std::max(abs_tol, rel_tol * l1(c));
    bool ok = true;
    for (int c = 0; c < M; ++c) ok = ok && err(c) <= budget(c);
    out.value = value;
    out.l1 = l1;
    out.error = err;
    out.panels = static_cast<int>(panels.size());
    if (ok) {
      out.converged = true;
      return out;
    }
    if (static_cast<int>(panels.size()) >= max_panels) return out;

    std::size_t worst = 0;
    double worst_ratio = -1.0;
    for (std::size_t i = 0; i < panels.size(); ++i) {
      const double ratio = panels[i].error.cwiseQuotient(budget).maxCoeff();
      if (ratio > worst_ratio) {
        worst_ratio = ratio;
        worst = i;
      }
    }
    const double a = panels[worst].a, b = panels[worst].b, mid = 0.5 * (a + b);
    if (!(mid > a && mid < b)) return out;  // cannot split further
    panels[worst] = detail::gk21<M>(f, a, mid);
    panels.push_back(detail::gk21<M>(f, mid, b));
  }
}

}  // namespace sldp::numerics
