#include "sldp/measures.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>

namespace sldp {

// --- SymMatrix --------------------------------------------------------------

SymMatrix::SymMatrix(int k) : k_(k), packed_(static_cast<std::size_t>(k) * (k + 1) / 2, 0.0) {
  if (k < 0) throw ValidationError("SymMatrix dimension must be nonnegative");
}

int SymMatrix::index(int i, int j) const {
  if (i > j) std::swap(i, j);
  // row-major upper triangle
  return i * k_ - i * (i - 1) / 2 + (j - i);
}

SymMatrix SymMatrix::identity(int k) {
  SymMatrix m(k);
  for (int i = 0; i < k; ++i) m.set(i, i, 1.0);
  return m;
}

SymMatrix SymMatrix::from_dense(const Mat& m, double tol) {
  if (m.rows() != m.cols()) throw ValidationError("symmetric matrix must be square");
  const int k = static_cast<int>(m.rows());
  SymMatrix out(k);
  for (int i = 0; i < k; ++i) {
    for (int j = i; j < k; ++j) {
      if (std::abs(m(i, j) - m(j, i)) > tol) throw ValidationError("matrix is not symmetric");
      out.set(i, j, m(i, j));
    }
  }
  return out;
}

Mat SymMatrix::dense() const {
  Mat m(k_, k_);
  for (int i = 0; i < k_; ++i)
    for (int j = 0; j < k_; ++j) m(i, j) = (*this)(i, j);
  return m;
}

double SymMatrix::trace() const {
  double t = 0.0;
  for (int i = 0; i < k_; ++i) t += (*this)(i, i);
  return t;
}

// --- EmpiricalMeasure -------------------------------------------------------

EmpiricalMeasure::EmpiricalMeasure(Mat points)
    : EmpiricalMeasure(points, Vec::Constant(points.rows(), 1.0 / static_cast<double>(points.rows()))) {
  uniform_ = true;
}

EmpiricalMeasure::EmpiricalMeasure(Mat points, Vec weights)
    : points_(std::move(points)), weights_(std::move(weights)) {
  if (points_.rows() < 1 || points_.cols() < 1) throw ValidationError("empirical measure is empty");
  if (weights_.size() != points_.rows()) throw ValidationError("one weight per point is required");
  if (!points_.allFinite()) throw ValidationError("empirical measure has non-finite points");
  if ((weights_.array() < 0.0).any() || !weights_.allFinite()) {
    throw ValidationError("weights must be finite and nonnegative");
  }
  if (std::abs(weights_.sum() - 1.0) > 1e-12) throw ValidationError("weights must sum to 1");
  const double w0 = weights_(0);
  uniform_ = (weights_.array() == w0).all();
}

double EmpiricalMeasure::norm_moment(double q) const {
  double s = 0.0;
  for (int i = 0; i < size(); ++i) s += weights_(i) * std::pow(points_.row(i).norm(), q);
  return s;
}

// --- GaussianMeasure --------------------------------------------------------

GaussianMeasure::GaussianMeasure(Vec mean, Mat cov) : mean_(std::move(mean)), cov_(std::move(cov)) {
  const auto k = mean_.size();
  if (k < 1 || cov_.rows() != k || cov_.cols() != k) {
    throw ValidationError("Gaussian mean/cov dimensions disagree");
  }
  if (!mean_.allFinite() || !cov_.allFinite()) throw ValidationError("Gaussian has non-finite parameters");
  if ((cov_ - cov_.transpose()).cwiseAbs().maxCoeff() > 1e-12) {
    throw ValidationError("Gaussian covariance is not symmetric");
  }
  cov_ = 0.5 * (cov_ + cov_.transpose());
  Eigen::SelfAdjointEigenSolver<Mat> es(cov_, Eigen::EigenvaluesOnly);
  if (es.eigenvalues().minCoeff() < -1e-12) {
    throw ValidationError("Gaussian covariance is not positive semidefinite");
  }
}

GaussianMeasure GaussianMeasure::standard(int k) { return {Vec::Zero(k), Mat::Identity(k, k)}; }

GaussianMeasure GaussianMeasure::isotropic(int k, double variance) {
  return {Vec::Zero(k), variance * Mat::Identity(k, k)};
}

GaussianMeasure GaussianMeasure::centered(Mat cov) {
  const auto k = cov.rows();
  return {Vec::Zero(k), std::move(cov)};
}

// --- maps -------------------------------------------------------------------

EmpiricalMeasure row_empirical(const StiefelFrame& a) {
  return EmpiricalMeasure(a.entries() * std::sqrt(static_cast<double>(a.n())));
}

EmpiricalMeasure row_empirical(const Mat& rows) { return EmpiricalMeasure(rows); }

SymMatrix covariance(const EmpiricalMeasure& m) {
  const Mat c = m.points().transpose() * m.weights().asDiagonal() * m.points();
  SymMatrix out(m.dim());
  for (int i = 0; i < m.dim(); ++i)
    for (int j = i; j < m.dim(); ++j) out.set(i, j, c(i, j));
  return out;
}

SymMatrix covariance(const GaussianMeasure& m) {
  const Mat c = m.cov() + m.mean() * m.mean().transpose();
  SymMatrix out(m.dim());
  for (int i = 0; i < m.dim(); ++i)
    for (int j = i; j < m.dim(); ++j) out.set(i, j, c(i, j));
  return out;
}

Mat gamma_map(const SymMatrix& m) {
  const int k = m.k();
  Mat g = Mat::Zero(k, k);
  for (int i = 0; i < k; ++i) {
    double pivot = m(i, i);
    for (int h = 0; h < i; ++h) pivot -= g(h, i) * g(h, i);
    if (!(pivot > 1e-12)) throw DegenerateInputError("gamma_map: non-positive pivot (singular matrix)");
    g(i, i) = std::sqrt(pivot);
    for (int j = i + 1; j < k; ++j) {
      double num = m(i, j);
      for (int h = 0; h < i; ++h) num -= g(h, i) * g(h, j);
      g(i, j) = num / g(i, i);
    }
  }
  return g;
}

GaussianMeasure gaussian_pushforward(const GaussianMeasure& nu, const Mat& t) {
  const int k = nu.dim();
  if (t.rows() != k || t.cols() != k) throw ValidationError("pushforward matrix has wrong shape");
  Eigen::JacobiSVD<Mat> svd(t);
  const auto& s = svd.singularValues();
  if (!(s(k - 1) > 0.0) || s(0) / s(k - 1) >= 1e12) {
    throw DegenerateInputError("pushforward matrix is singular (condition number >= 1e12)");
  }
  Mat cov = t.transpose() * nu.cov() * t;
  cov = 0.5 * (cov + cov.transpose());
  return GaussianMeasure(t.transpose() * nu.mean(), std::move(cov));
}

double relative_entropy_to_standard(const GaussianMeasure& nu) {
  const int k = nu.dim();
  Eigen::LLT<Mat> llt(nu.cov());
  if (llt.info() != Eigen::Success) return kInf;
  double log_det = 0.0;
  for (int i = 0; i < k; ++i) {
    const double d = llt.matrixLLT()(i, i);
    if (!(d > 0.0)) return kInf;
    log_det += 2.0 * std::log(d);
  }
  return 0.5 * (nu.cov().trace() + nu.mean().squaredNorm() - k - log_det);
}

namespace {

double max_eigenvalue(const Mat& m) {
  Eigen::SelfAdjointEigenSolver<Mat> es(m, Eigen::EigenvaluesOnly);
  return es.eigenvalues().maxCoeff();
}

}  // namespace

double hk_gaussian(const GaussianMeasure& nu) {
  const int k = nu.dim();
  const Mat c = covariance(nu).dense();
  if (max_eigenvalue(c - Mat::Identity(k, k)) > kPsdTolerance) return kInf;
  const double h = relative_entropy_to_standard(nu);
  if (!std::isfinite(h)) return kInf;
  return h + 0.5 * (k - c.trace());
}

double hk_discrete(const EmpiricalMeasure&) { return kInf; }

double jk_gaussian(const GaussianMeasure& nu, const SymMatrix& m) {
  if (m.k() != nu.dim()) throw ValidationError("jk_gaussian: dimension mismatch");
  const Mat c = covariance(nu).dense();
  const Mat md = m.dense();
  if (max_eigenvalue(c - md) > kPsdTolerance) return kInf;
  const double h = relative_entropy_to_standard(nu);
  if (!std::isfinite(h)) return kInf;
  return h + 0.5 * (md.trace() - c.trace());
}

}  // namespace sldp
