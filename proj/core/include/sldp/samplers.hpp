#pragma once

#include "sldp/common.hpp"
#include "sldp/family.hpp"
#include "sldp/rng.hpp"

namespace sldp {

/// An n x k matrix with orthonormal columns. k <= n is accepted so that the
/// orthogonal factor of a square QR is representable; Haar sampling itself
/// requires k < n.
class StiefelFrame {
 public:
  /// Frobenius tolerance per column on ||A^T A - I_k||_F.
  static constexpr double kGramTolerance = 1e-10;
  /// Tolerance on each column's Euclidean norm.
  static constexpr double kColumnTolerance = 1e-12;

  /// Validates orthonormality; throws ValidationError otherwise.
  explicit StiefelFrame(Mat entries);

  /// The first k canonical basis vectors of R^n.
  static StiefelFrame canonical(int n, int k);

  int n() const { return static_cast<int>(entries_.rows()); }
  int k() const { return static_cast<int>(entries_.cols()); }
  const Mat& entries() const { return entries_; }

  /// ||A^T A - I_k||_F
  double gram_error() const;

 private:
  Mat entries_;
};

/// QR factorization z = q r with r upper triangular and diag(r) > 0.
struct BartlettPair {
  StiefelFrame q;
  Mat r;
};

/// Householder QR with the sign convention fixed so that diag(r) > 0; for an
/// i.i.d. Gaussian z the orthogonal factor is Haar distributed and
/// r(i,i)^2 ~ chi-square(n - i + 1) (0-based: n - i).
/// Throws DegenerateInputError when some |r(i,i)| < 1e-12 * sqrt(n).
BartlettPair bartlett_qr(const Mat& z);

/// n x k matrix of i.i.d. standard normals.
Mat gaussian_matrix(int n, int k, RngStream& rng);

/// Haar-distributed frame on the Stiefel manifold V_{n,k}; requires n > k >= 1.
StiefelFrame haar_stiefel(int n, int k, RngStream& rng);

/// log of the normalizer 2 p^{1/p - 1} Gamma(1/p) of exp(-|y|^p / p).
double p_normal_log_normalizer(double p);

/// Generalized p-normal draw: S (p G)^{1/p}, G ~ Gamma(1/p, 1), S a fair sign.
double sample_p_normal(double p, RngStream& rng);

/// The i.i.d. vector xi^(n) of the family's base law.
Vec sample_xi(const MeasureFamily& family, int n, RngStream& rng);

/// X^(n) = xi^(n) rho((1/n) sum r(xi_i)); for ball-lp the cone sample is
/// additionally scaled by U^{1/n}.
Vec sample_X(const MeasureFamily& family, int n, RngStream& rng);

/// Applies rho((1/n) sum r(xi_i)) to a base vector.
Vec apply_representation(const MeasureFamily& family, Vec xi);

/// U^{1/n} x with U uniform on [0, 1].
Vec scale_to_ball(const Vec& x, RngStream& rng);
/// U^{1/n} x for a given u in [0, 1].
Vec scale_to_ball(const Vec& x, double u);

/// n^{-1/2} a^T x.
Vec project(const StiefelFrame& a, const Vec& x);

/// Sampler for the exponentially tilted base law with density proportional
/// to exp(s1 y - a |y|^p), a > 0. Gaussian (p = 2) draws are exact; other p
/// use rejection from a three-piece exponential envelope of the log-concave
/// density.
class TiltedPNormal {
 public:
  TiltedPNormal(double p, double s1, double a);
  double operator()(RngStream& rng) const;

  double mode() const { return mode_; }
  double log_density(double y) const;  // unnormalized

 private:
  double p_, s1_, a_;
  double mode_;
  // Envelope: flat on [zl, zr], exponential tails with rates bl (left) and br (right).
  double zl_ = 0.0, zr_ = 0.0, bl_ = 1.0, br_ = 1.0, g_mode_ = 0.0;
  double w_left_ = 0.0, w_mid_ = 0.0, w_right_ = 0.0;
};

}  // namespace sldp
