#pragma once

#include <functional>
#include <utility>

namespace sldp::numerics {

/// An unnormalized log-density on the real line together with two scalar
/// statistics (phi1, phi2), both supplied relative to their values at `peak`
/// so that callers can evaluate the differences without cancellation:
///   log_density(y) = g(y) - g(peak),  stats(y) = phi(y) - phi(peak).
/// `peak` must be a global maximizer of g on the integration range and g must
/// be unimodal there. With `half_line` set, g and both statistics are even and
/// the integral is taken over [0, inf) and doubled.
struct TiltedProblem {
  std::function<double(double)> log_density;
  std::function<std::pair<double, double>(double)> stats;
  double peak = 0.0;
  double log_peak = 0.0;                        // g(peak)
  std::pair<double, double> stats_at_peak{};    // phi(peak)
  bool half_line = false;
};

/// log of the integral of exp(g), and the mean vector and covariance matrix of
/// (phi1, phi2) under the normalized density exp(g) / integral.
struct TiltedMoments {
  double log_mass = 0.0;
  double mean1 = 0.0, mean2 = 0.0;
  double cov11 = 0.0, cov12 = 0.0, cov22 = 0.0;
  bool converged = false;
  int panels = 0;
};

/// Integrand magnitude (in log units below the peak) at which the tails are cut.
inline constexpr double kTailDrop = 45.0;

/// Adaptive Gauss-Kronrod evaluation of the tilted moments. The range is
/// truncated where g falls kTailDrop below its peak (about 1e-20 relative).
TiltedMoments tilted_moments(const TiltedProblem& problem, double rel_tol = 1e-13);

}  // namespace sldp::numerics
