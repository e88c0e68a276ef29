#pragma once

#include "sldp/common.hpp"
#include "sldp/samplers.hpp"

#include <vector>

namespace sldp {

/// Real symmetric k x k matrix stored as its packed upper triangle, so that
/// M(i,j) == M(j,i) holds exactly.
class SymMatrix {
 public:
  explicit SymMatrix(int k = 0);
  static SymMatrix identity(int k);
  /// Accepts a dense matrix symmetric within `tol` (max abs entry difference)
  /// and keeps the upper triangle.
  static SymMatrix from_dense(const Mat& m, double tol = 1e-12);

  int k() const { return k_; }
  double operator()(int i, int j) const { return packed_[index(i, j)]; }
  void set(int i, int j, double v) { packed_[index(i, j)] = v; }

  Mat dense() const;
  double trace() const;

 private:
  int index(int i, int j) const;

  int k_;
  std::vector<double> packed_;
};

/// Weighted point cloud in R^k (points are the rows of an N x k matrix).
class EmpiricalMeasure {
 public:
  /// Uniform weights 1/N.
  explicit EmpiricalMeasure(Mat points);
  /// Explicit nonnegative weights summing to one within 1e-12.
  EmpiricalMeasure(Mat points, Vec weights);

  int size() const { return static_cast<int>(points_.rows()); }
  int dim() const { return static_cast<int>(points_.cols()); }
  const Mat& points() const { return points_; }
  const Vec& weights() const { return weights_; }
  bool uniform_weights() const { return uniform_; }

  /// Integral of ||x||^q.
  double norm_moment(double q) const;

 private:
  Mat points_;
  Vec weights_;
  bool uniform_ = true;
};

/// Gaussian law on R^k; cov symmetric within 1e-12 and eigenvalues >= -1e-12.
class GaussianMeasure {
 public:
  GaussianMeasure(Vec mean, Mat cov);
  static GaussianMeasure standard(int k);
  static GaussianMeasure isotropic(int k, double variance);
  static GaussianMeasure centered(Mat cov);

  int dim() const { return static_cast<int>(mean_.size()); }
  const Vec& mean() const { return mean_; }
  const Mat& cov() const { return cov_; }

 private:
  Vec mean_;
  Mat cov_;
};

/// Empirical measure of the rows of sqrt(n) a: n uniform points in R^k.
EmpiricalMeasure row_empirical(const StiefelFrame& a);
/// Empirical measure of the unscaled rows of an arbitrary n x k matrix.
EmpiricalMeasure row_empirical(const Mat& rows);

/// Second-moment matrix (not mean-centered) of a measure.
SymMatrix covariance(const EmpiricalMeasure& m);
SymMatrix covariance(const GaussianMeasure& m);

/// Upper-triangular Gram-Schmidt/Cholesky factor of a positive definite
/// matrix: Gamma(M)^T Gamma(M) = M, positive diagonal. Throws
/// DegenerateInputError when a pivot falls to 1e-12 or below.
Mat gamma_map(const SymMatrix& m);

/// Law of x t (x a row vector distributed as nu): mean t^T m, cov t^T S t.
GaussianMeasure gaussian_pushforward(const GaussianMeasure& nu, const Mat& t);

/// Relative entropy H(nu | standard Gaussian); +inf when cov is singular.
double relative_entropy_to_standard(const GaussianMeasure& nu);

/// Tolerance on the semidefinite constraint C(nu) <= M in H_k and J_k.
inline constexpr double kPsdTolerance = 1e-10;

/// H_k(nu) = H(nu | gamma^k) + tr(I - C(nu)) / 2 when C(nu) <= I, else +inf.
double hk_gaussian(const GaussianMeasure& nu);

/// Discrete measures are never absolutely continuous w.r.t. the Gaussian.
double hk_discrete(const EmpiricalMeasure& nu);

/// J_k(nu, M) = H(nu | gamma^k) + tr(M - C(nu)) / 2 when C(nu) <= M, else +inf.
double jk_gaussian(const GaussianMeasure& nu, const SymMatrix& m);

}  // namespace sldp
