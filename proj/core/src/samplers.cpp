#include "sldp/samplers.hpp"

#include <Eigen/QR>
#include <boost/math/special_functions/gamma.hpp>

#include <cmath>
#include <sstream>

namespace sldp {

StiefelFrame::StiefelFrame(Mat entries) : entries_(std::move(entries)) {
  const auto k = entries_.cols();
  if (k < 1 || entries_.rows() < k) {
    throw ValidationError("Stiefel frame needs n >= k >= 1");
  }
  if (!entries_.allFinite()) throw ValidationError("Stiefel frame has non-finite entries");
  const double err = gram_error();
  if (err > kGramTolerance * static_cast<double>(k)) {
    std::ostringstream os;
    os << "columns are not orthonormal: ||A^T A - I||_F = " << err;
    throw ValidationError(os.str());
  }
  for (Eigen::Index j = 0; j < k; ++j) {
    if (std::abs(entries_.col(j).norm() - 1.0) > kColumnTolerance) {
      throw ValidationError("frame column does not have unit norm");
    }
  }
}

StiefelFrame StiefelFrame::canonical(int n, int k) {
  return StiefelFrame(Mat::Identity(n, k));
}

double StiefelFrame::gram_error() const {
  const auto k = entries_.cols();
  return (entries_.transpose() * entries_ - Mat::Identity(k, k)).norm();
}

BartlettPair bartlett_qr(const Mat& z) {
  const auto n = z.rows(), k = z.cols();
  if (k < 1 || n < k) throw ValidationError("bartlett_qr needs n >= k >= 1");
  Eigen::HouseholderQR<Mat> qr(z);
  Mat q = qr.householderQ() * Mat::Identity(n, k);
  Mat r = qr.matrixQR().topRows(k).triangularView<Eigen::Upper>();
  const double floor = 1e-12 * std::sqrt(static_cast<double>(n));
  for (Eigen::Index i = 0; i < k; ++i) {
    if (std::abs(r(i, i)) < floor) {
      throw DegenerateInputError("rank-deficient input: |r(i,i)| below 1e-12 sqrt(n)");
    }
    if (r(i, i) < 0.0) {
      r.row(i) *= -1.0;
      q.col(i) *= -1.0;
    }
  }
  return BartlettPair{StiefelFrame(std::move(q)), std::move(r)};
}

Mat gaussian_matrix(int n, int k, RngStream& rng) {
  Mat z(n, k);
  // Column-major fill keeps the draw order independent of Eigen internals.
  for (int j = 0; j < k; ++j)
    for (int i = 0; i < n; ++i) z(i, j) = rng.normal();
  return z;
}

StiefelFrame haar_stiefel(int n, int k, RngStream& rng) {
  if (!(n > k && k >= 1)) throw ValidationError("haar_stiefel needs n > k >= 1");
  for (;;) {
    try {
      return bartlett_qr(gaussian_matrix(n, k, rng)).q;
    } catch (const DegenerateInputError&) {
      // probability zero; redraw
    }
  }
}

double p_normal_log_normalizer(double p) {
  return std::log(2.0) + (1.0 / p - 1.0) * std::log(p) + boost::math::lgamma(1.0 / p);
}

double sample_p_normal(double p, RngStream& rng) {
  if (p == 2.0) return rng.normal();
  const double g = rng.gamma(1.0 / p);
  return rng.sign() * std::pow(p * g, 1.0 / p);
}

Vec sample_xi(const MeasureFamily& family, int n, RngStream& rng) {
  Vec xi(n);
  const double p = family.p();
  for (int i = 0; i < n; ++i) xi(i) = sample_p_normal(p, rng);
  return xi;
}

Vec apply_representation(const MeasureFamily& family, Vec xi) {
  if (family.r_is_one()) return xi;
  double s = 0.0;
  for (Eigen::Index i = 0; i < xi.size(); ++i) s += family.r(xi(i));
  xi *= family.rho(s / static_cast<double>(xi.size()));
  return xi;
}

Vec sample_X(const MeasureFamily& family, int n, RngStream& rng) {
  if (n < 1) throw ValidationError("sample_X needs n >= 1");
  Vec x = apply_representation(family, sample_xi(family, n, rng));
  if (family.kind() == FamilyKind::BallLp) x = scale_to_ball(x, rng);
  return x;
}

Vec scale_to_ball(const Vec& x, double u) {
  if (!(u >= 0.0 && u <= 1.0)) throw ValidationError("scale_to_ball needs u in [0, 1]");
  return x * std::pow(u, 1.0 / static_cast<double>(x.size()));
}

Vec scale_to_ball(const Vec& x, RngStream& rng) { return scale_to_ball(x, rng.uniform()); }

Vec project(const StiefelFrame& a, const Vec& x) {
  if (x.size() != a.n()) throw ValidationError("project: dimension mismatch between frame and vector");
  return a.entries().transpose() * x / std::sqrt(static_cast<double>(a.n()));
}

// ---------------------------------------------------------------------------

TiltedPNormal::TiltedPNormal(double p, double s1, double a) : p_(p), s1_(s1), a_(a) {
  if (!(a > 0.0) || !(p > 1.0)) throw DomainError("tilted p-normal needs p > 1 and a > 0");
  mode_ = s1 == 0.0 ? 0.0 : std::copysign(std::pow(std::abs(s1) / (a * p), 1.0 / (p - 1.0)), s1);
  if (p == 2.0) return;

  g_mode_ = log_density(mode_);
  // Points one log unit below the mode on each side.
  auto drop_point = [&](double dir) {
    double lo = 0.0, hi = 1e-3 * std::max(1.0, std::abs(mode_));
    while (log_density(mode_ + dir * hi) > g_mode_ - 1.0) {
      lo = hi;
      hi *= 2.0;
    }
    for (int i = 0; i < 60; ++i) {
      const double mid = 0.5 * (lo + hi);
      (log_density(mode_ + dir * mid) > g_mode_ - 1.0 ? lo : hi) = mid;
    }
    return mode_ + dir * hi;
  };
  auto slope = [&](double y) {
    return s1_ - a_ * p_ * std::copysign(std::pow(std::abs(y), p_ - 1.0), y);
  };
  const double yl = drop_point(-1.0), yr = drop_point(+1.0);
  bl_ = slope(yl);
  br_ = -slope(yr);
  zl_ = yl + (g_mode_ - log_density(yl)) / bl_;
  zr_ = yr - (g_mode_ - log_density(yr)) / br_;
  w_left_ = 1.0 / bl_;
  w_mid_ = zr_ - zl_;
  w_right_ = 1.0 / br_;
}

double TiltedPNormal::log_density(double y) const {
  return s1_ * y - a_ * std::pow(std::abs(y), p_);
}

double TiltedPNormal::operator()(RngStream& rng) const {
  if (p_ == 2.0) {
    const double var = 1.0 / (2.0 * a_);
    return s1_ * var + std::sqrt(var) * rng.normal();
  }
  const double total = w_left_ + w_mid_ + w_right_;
  for (;;) {
    const double u = rng.uniform() * total;
    double y, envelope;
    if (u < w_left_) {
      const double e = -std::log(rng.uniform_open());
      y = zl_ - e / bl_;
      envelope = g_mode_ - bl_ * (zl_ - y);
    } else if (u < w_left_ + w_mid_) {
      y = zl_ + rng.uniform() * w_mid_;
      envelope = g_mode_;
    } else {
      const double e = -std::log(rng.uniform_open());
      y = zr_ + e / br_;
      envelope = g_mode_ - br_ * (y - zr_);
    }
    if (std::log(rng.uniform_open()) <= log_density(y) - envelope) return y;
  }
}

}  // namespace sldp
