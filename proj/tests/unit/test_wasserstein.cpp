#include "sldp/wasserstein.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

using namespace sldp;

TEST(Wasserstein1d, ShiftedSamples) {
  const std::vector<double> x{0, 1, 2, 3}, y{0.5, 1.5, 2.5, 3.5};
  EXPECT_NEAR(wasserstein_1d(x, y, 1.0).value, 0.5, 1e-15);
  EXPECT_NEAR(wasserstein_1d(x, y, 2.0).value, 0.5, 1e-15);
  EXPECT_FALSE(wasserstein_1d(x, y, 1.0).interpolated);
}

TEST(Wasserstein1d, SubUnitExponentReturnsCost) {
  const std::vector<double> x{0, 1}, y{1, 2};
  EXPECT_NEAR(wasserstein_1d(x, y, 0.5).value, 1.0, 1e-15);
}

TEST(Wasserstein1d, UnequalCountsInterpolate) {
  const std::vector<double> x{0, 1}, y{0, 0.5, 1};
  const auto r = wasserstein_1d(x, y, 1.0);
  EXPECT_TRUE(r.interpolated);
  // Quantile coupling: x is 0 on [0,1/2), 1 on [1/2,1); y is 0, 0.5, 1 on thirds.
  EXPECT_NEAR(r.value, (1.0 / 6) * 0.5 + (1.0 / 6) * 0.5, 1e-12);
}

TEST(Wasserstein1d, WeightedMatchesUniform) {
  const std::vector<double> x{0, 1, 3}, y{1, 2, 2.5};
  const std::vector<double> w(3, 1.0 / 3);
  EXPECT_NEAR(wasserstein_1d_weighted(x, w, y, w, 1.0), wasserstein_1d(x, y, 1.0).value, 1e-14);
}

TEST(GaussianMoment, KnownValues) {
  EXPECT_NEAR(gaussian_norm_moment(1, 2.0), 1.0, 1e-14);
  EXPECT_NEAR(gaussian_norm_moment(3, 2.0), 3.0, 1e-13);
  EXPECT_NEAR(gaussian_norm_moment(1, 1.0), std::sqrt(2 / M_PI), 1e-14);
  EXPECT_NEAR(gaussian_norm_moment(2, 1.0), std::sqrt(M_PI / 2), 1e-14);
}

TEST(QuantileGrid, SymmetricAndSorted) {
  const auto g = gaussian_quantile_grid(11);
  EXPECT_TRUE(std::is_sorted(g.begin(), g.end()));
  EXPECT_NEAR(g[5], 0.0, 1e-15);
  EXPECT_NEAR(g[0], -g[10], 1e-14);
}

TEST(ExactWasserstein, AgreesWithSortedCouplingIn1d) {
  RngStream r(2);
  Mat a(40, 1), b(40, 1);
  for (int i = 0; i < 40; ++i) {
    a(i, 0) = r.normal();
    b(i, 0) = 1 + 2 * r.normal();
  }
  std::vector<double> x(a.data(), a.data() + 40), y(b.data(), b.data() + 40);
  std::sort(x.begin(), x.end());
  std::sort(y.begin(), y.end());
  for (double q : {1.0, 2.0}) {
    EXPECT_NEAR(exact_wasserstein(EmpiricalMeasure(a), EmpiricalMeasure(b), q), wasserstein_1d(x, y, q).value, 1e-12);
  }
}

TEST(ExactWasserstein, PermutationInvariantIn2d) {
  Mat a(3, 2);
  a << 0, 0, 1, 0, 0, 1;
  Mat b = a;
  b.row(0).swap(b.row(2));
  EXPECT_NEAR(exact_wasserstein(EmpiricalMeasure(a), EmpiricalMeasure(b), 2.0), 0.0, 1e-15);
}

TEST(DistanceToGaussian, SmallForLargeGaussianSample) {
  RngStream r(8);
  const int n = 20000;
  Mat pts(n, 2);
  for (int i = 0; i < n; ++i) pts.row(i) << r.normal(), r.normal();
  const auto d = wasserstein_to_gaussian(EmpiricalMeasure(pts), 1.0, 32, r);
  EXPECT_LT(d.total, 0.03);
  EXPECT_THROW(wasserstein_to_gaussian(EmpiricalMeasure(pts), 2.0, 32, r), ValidationError);
}
