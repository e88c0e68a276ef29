#pragma once

#include "sldp/legendre.hpp"
#include "sldp/psi.hpp"

#include <optional>

namespace sldp {

/// A rate value with the minimizing second coordinate and the Legendre
/// argmax at that coordinate.
struct RateResult {
  double value = kInf;
  bool converged = false;
  double tau = 1.0;  // minimizing tau (J^qu), t2 (J_X) or c (J^an)
  Vec argmax;        // Legendre argmax at the minimizer
  int iterations = 0;
};

/// Psi*_nu(tau1, tau2). For r = 1 families only tau2 = 1 is finite and the
/// conjugate is taken over t1 alone.
ConjugateResult psi_conjugate(const Psi& psi, const Vec& tau1, double tau2,
                              const SolverConfig& cfg = {},
                              const std::optional<Vec>& warm_start = std::nullopt);

/// J^qu_nu(x) = inf_tau Psi*_nu(x / rho(tau), tau).
RateResult j_quenched(const MeasureFamily& family, const NuSpec& nu, const Vec& x,
                      const SolverConfig& cfg = {});

/// Lambda-bar*(tau1, tau2) (r = 1: over s1 only, tau2 pinned to 1).
ConjugateResult lambda_bar_conjugate(const MeasureFamily& family, double tau1, double tau2,
                                     const SolverConfig& cfg = {},
                                     const std::optional<Vec>& warm_start = std::nullopt);

/// J_X(y) = inf_{t2 > 0} Lambda-bar*(y^2 / rho(t2)^2, t2). Needs Lambda-bar
/// finite near the origin, which fails for p < 2 (DomainError).
RateResult j_x(const MeasureFamily& family, double y, const SolverConfig& cfg = {});

/// J^an(x) = inf_{c in (0,1)} J_X(||x|| / c) - log(1 - c^2) / 2.
RateResult j_annealed(const MeasureFamily& family, const Vec& x, const SolverConfig& cfg = {});

}  // namespace sldp
