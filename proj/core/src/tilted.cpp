#include "sldp/numerics/tilted.hpp"

#include "sldp/numerics/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace sldp::numerics {
namespace {

// Distance from the peak (in direction `dir`) at which g has dropped by kTailDrop.
double cutoff_distance(const std::function<double(double)>& g, double peak, double g_peak,
                       double dir) {
  const double target = g_peak - kTailDrop;
  double lo = 0.0;
  double hi = 1e-3 * std::max(1.0, std::abs(peak));
  for (int i = 0; i < 2000 && g(peak + dir * hi) > target; ++i) {
    lo = hi;
    hi *= 2.0;
  }
  for (int i = 0; i < 30; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (g(peak + dir * mid) > target) {
      lo = mid;
    } else {
      hi = mid;
    }
    if (hi - lo <= 1e-3 * hi) break;
  }
  return hi;
}

}  // namespace

TiltedMoments tilted_moments(const TiltedProblem& problem, double rel_tol) {
  const auto& g = problem.log_density;
  const double peak = problem.peak;
  const double g_peak = g(peak);
  const auto [c1, c2] = problem.stats_at_peak;

  const double right = peak + cutoff_distance(g, peak, g_peak, +1.0);
  double left = 0.0;
  if (!problem.half_line) left = peak - cutoff_distance(g, peak, g_peak, -1.0);

  std::vector<double> breaks{left, peak, right};
  if (left < 0.0 && right > 0.0) breaks.push_back(0.0);
  std::sort(breaks.begin(), breaks.end());
  breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());

  // Statistics stay centered at their peak values, which keeps the covariance
  // well conditioned when the tilted law is tightly concentrated.
  auto integrand = [&](double y) {
    Vector<6> v;
    const double w = std::exp(g(y) - g_peak);
    const auto [d1, d2] = problem.stats(y);
    v << w, w * d1, w * d2, w * d1 * d1, w * d1 * d2, w * d2 * d2;
    return v;
  };
  const auto res = integrate_adaptive<6>(integrand, breaks, rel_tol, 1e-300);

  TiltedMoments out;
  const double mass = res.value(0);
  out.log_mass = problem.log_peak + g_peak + std::log(mass) + (problem.half_line ? std::log(2.0) : 0.0);
  const double e1 = res.value(1) / mass, e2 = res.value(2) / mass;
  out.mean1 = c1 + e1;
  out.mean2 = c2 + e2;
  out.cov11 = std::max(0.0, res.value(3) / mass - e1 * e1);
  out.cov12 = res.value(4) / mass - e1 * e2;
  out.cov22 = std::max(0.0, res.value(5) / mass - e2 * e2);
  out.converged = res.converged;
  out.panels = res.panels;
  return out;
}

}  // namespace sldp::numerics
