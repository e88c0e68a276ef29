#pragma once

#include "sldp/measures.hpp"
#include "sldp/rng.hpp"

#include <span>
#include <vector>

namespace sldp {

/// 1D transport distance between two sorted samples. `interpolated` is set
/// when the counts differ and the quantile-coupling fallback was used.
struct Wasserstein1d {
  double value = 0.0;
  bool interpolated = false;
};

/// For q >= 1: ((1/n) sum |x_(i) - y_(i)|^q)^{1/q}. For q < 1 the cost is
/// returned without the outer root (that is the metric for q < 1).
Wasserstein1d wasserstein_1d(std::span<const double> x_sorted, std::span<const double> y_sorted,
                             double q);

/// Same distance for weighted sorted samples (weights sum to one each), via
/// the monotone quantile coupling.
double wasserstein_1d_weighted(std::span<const double> x_sorted, std::span<const double> wx,
                               std::span<const double> y_sorted, std::span<const double> wy,
                               double q);

/// Phi^{-1}((i - 1/2) / n), i = 1..n.
std::vector<double> gaussian_quantile_grid(int n);

/// E ||Z||^q for Z standard normal in R^k.
double gaussian_norm_moment(int k, double q);

struct GaussianDistance {
  double sliced = 0.0;      // mean over directions of the 1D distance
  double moment_gap = 0.0;  // |int ||x||^q dm - E ||Z||^q|
  double total = 0.0;
};

/// Sliced surrogate of W_q(m, gamma^k) plus the q-th moment gap.
GaussianDistance wasserstein_to_gaussian(const EmpiricalMeasure& m, double q, int n_directions,
                                         RngStream& rng);

/// Exact W_q between two uniform empirical measures of equal size (at most
/// 512 points) by optimal assignment. Cross-check oracle only.
double exact_wasserstein(const EmpiricalMeasure& a, const EmpiricalMeasure& b, double q);

}  // namespace sldp
