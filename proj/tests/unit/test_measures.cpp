#include "sldp/measures.hpp"

#include <gtest/gtest.h>

#include <Eigen/Cholesky>

#include <cmath>

using namespace sldp;

TEST(SymMatrix, SymmetricAccessAndTrace) {
  SymMatrix m(3);
  m.set(0, 2, 1.5);
  m.set(1, 1, 2.0);
  EXPECT_EQ(m(2, 0), 1.5);
  EXPECT_EQ(m.trace(), 2.0);
  EXPECT_EQ(m.dense(), m.dense().transpose());
}

TEST(SymMatrix, FromDenseChecksSymmetry) {
  Mat a = Mat::Identity(2, 2);
  a(0, 1) = 1e-6;
  EXPECT_THROW(SymMatrix::from_dense(a), ValidationError);
  EXPECT_NO_THROW(SymMatrix::from_dense(a, 1e-5));
}

TEST(Empirical, ValidatesWeights) {
  const Mat pts = Mat::Random(4, 2);
  EXPECT_THROW(EmpiricalMeasure(pts, Vec::Constant(4, 0.3)), ValidationError);
  EXPECT_THROW(EmpiricalMeasure(pts, Vec::Constant(3, 1.0 / 3)), ValidationError);
  Vec w(4);
  w << 0.1, 0.2, 0.3, 0.4;
  const EmpiricalMeasure m(pts, w);
  EXPECT_FALSE(m.uniform_weights());
  EXPECT_TRUE(EmpiricalMeasure(pts).uniform_weights());
}

TEST(Empirical, CovarianceIsWeightedSecondMoment) {
  Mat pts(2, 2);
  pts << 1, 2, -1, 0;
  Vec w(2);
  w << 0.25, 0.75;
  const SymMatrix c = covariance(EmpiricalMeasure(pts, w));
  EXPECT_DOUBLE_EQ(c(0, 0), 0.25 + 0.75);
  EXPECT_DOUBLE_EQ(c(0, 1), 0.25 * 2);
  EXPECT_DOUBLE_EQ(c(1, 1), 0.25 * 4);
}

TEST(Gaussian, RejectsAsymmetricOrIndefinite) {
  Mat c = Mat::Identity(2, 2);
  c(0, 1) = 0.5;
  EXPECT_THROW(GaussianMeasure(Vec::Zero(2), c), ValidationError);
  c(1, 0) = 0.5;
  EXPECT_NO_THROW(GaussianMeasure(Vec::Zero(2), c));
  c(0, 1) = c(1, 0) = 2.0;
  EXPECT_THROW(GaussianMeasure(Vec::Zero(2), c), ValidationError);
}

TEST(GammaMap, EqualsUpperCholeskyFactor) {
  Mat b = Mat::Random(6, 6);
  const Mat m = b.transpose() * b + Mat::Identity(6, 6);
  const Mat g = gamma_map(SymMatrix::from_dense(m));
  const Mat u = Eigen::LLT<Mat>(m).matrixU();
  EXPECT_LT((g - u).norm(), 1e-12 * m.norm());
}

TEST(GammaMap, SingularThrows) {
  Mat m = Mat::Ones(2, 2);
  EXPECT_THROW(gamma_map(SymMatrix::from_dense(m)), DegenerateInputError);
}

TEST(Pushforward, TransformsMeanAndCovariance) {
  Mat s(2, 2);
  s << 2, 0.5, 0.5, 1;
  const GaussianMeasure nu((Vec(2) << 1, -1).finished(), s);
  Mat t(2, 2);
  t << 1, 2, 0, 3;
  const auto out = gaussian_pushforward(nu, t);
  EXPECT_LT((out.mean() - t.transpose() * nu.mean()).norm(), 1e-15);
  EXPECT_LT((out.cov() - t.transpose() * s * t).norm(), 1e-14);
  EXPECT_THROW(gaussian_pushforward(nu, Mat::Zero(2, 2)), DegenerateInputError);
}

TEST(Entropy, IsotropicClosedForm) {
  for (int k : {1, 3}) {
    for (double s2 : {0.2, 0.7, 1.0}) {
      EXPECT_NEAR(hk_gaussian(GaussianMeasure::isotropic(k, s2)), -0.5 * k * std::log(s2), 1e-12);
    }
    EXPECT_TRUE(std::isinf(hk_gaussian(GaussianMeasure::isotropic(k, 1.01))));
  }
}

TEST(Entropy, RelativeEntropyGeneralGaussian) {
  // H(N(m, S) | N(0, I)) = (tr S + |m|^2 - k - log det S) / 2.
  Mat s(2, 2);
  s << 0.5, 0.1, 0.1, 0.3;
  const Vec m = (Vec(2) << 0.2, -0.1).finished();
  const double expect = 0.5 * (s.trace() + m.squaredNorm() - 2 - std::log(s.determinant()));
  EXPECT_NEAR(relative_entropy_to_standard(GaussianMeasure(m, s)), expect, 1e-14);
  EXPECT_TRUE(std::isinf(relative_entropy_to_standard(GaussianMeasure(m, Mat::Zero(2, 2)))));
}

TEST(Entropy, MeanCountsTowardSecondMoment) {
  // C(nu) = S + m m^T must be dominated by I.
  const GaussianMeasure nu((Vec(1) << 0.6).finished(), Mat::Constant(1, 1, 0.7));
  EXPECT_TRUE(std::isinf(hk_gaussian(nu)));
  const GaussianMeasure ok((Vec(1) << 0.5).finished(), Mat::Constant(1, 1, 0.7));
  EXPECT_NEAR(hk_gaussian(ok), relative_entropy_to_standard(ok) + 0.5 * (1 - 0.95), 1e-14);
}

TEST(Entropy, JkReducesToHkAtIdentity) {
  Mat s(2, 2);
  s << 0.6, 0.2, 0.2, 0.5;
  const GaussianMeasure nu = GaussianMeasure::centered(s);
  EXPECT_NEAR(jk_gaussian(nu, SymMatrix::identity(2)), hk_gaussian(nu), 1e-15);
  EXPECT_TRUE(std::isinf(jk_gaussian(nu, SymMatrix::from_dense(0.1 * Mat::Identity(2, 2)))));
  EXPECT_TRUE(std::isinf(hk_discrete(EmpiricalMeasure(Mat::Zero(1, 2)))));
}

TEST(RowEmpirical, FrameRowsScaledByRootN) {
  const StiefelFrame a = StiefelFrame::canonical(4, 1);
  const EmpiricalMeasure m = row_empirical(a);
  EXPECT_EQ(m.size(), 4);
  EXPECT_DOUBLE_EQ(m.points()(0, 0), 2.0);
  EXPECT_DOUBLE_EQ(covariance(m).trace(), 1.0);
}
