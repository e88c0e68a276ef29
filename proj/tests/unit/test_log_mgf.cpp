#include "sldp/log_mgf.hpp"
#include "sldp/samplers.hpp"

#include <gtest/gtest.h>

#include <boost/math/quadrature/tanh_sinh.hpp>

#include <cmath>

using namespace sldp;

namespace {

// log E f(xi) for the p-normal law, by tanh-sinh over the real line, with the
// integrand shifted by `shift` to keep it in range.
double log_expect(double p, const std::function<double(double)>& log_f, double shift) {
  boost::math::quadrature::tanh_sinh<double> ts;
  auto integrand = [&](double y) {
    const double e = log_f(y) - std::pow(std::abs(y), p) / p - shift;
    return std::isnan(e) ? 0.0 : std::exp(e);
  };
  const double inf = std::numeric_limits<double>::infinity();
  const double v = ts.integrate(integrand, -inf, 0.0) + ts.integrate(integrand, 0.0, inf);
  return std::log(v) + shift - p_normal_log_normalizer(p);
}

}  // namespace

TEST(LambdaGaussian, ClosedForm) {
  const auto g = MeasureFamily::product_gaussian();
  for (double s1 : {-3.0, 0.0, 0.7, 5.0}) {
    for (double s2 : {-1.0, 0.0, 2.0}) {
      EXPECT_NEAR(lambda_eval(g, s1, s2), 0.5 * s1 * s1 + s2, 1e-12);
    }
  }
  const auto e = lambda_full(g, 1.5, 0.0, Order::Hessian);
  EXPECT_NEAR(e.grad(0), 1.5, 1e-12);
  EXPECT_NEAR(e.grad(1), 1.0, 1e-12);
  EXPECT_NEAR(e.hess(0, 0), 1.0, 1e-12);
  EXPECT_NEAR(e.hess(1, 1), 0.0, 1e-12);
}

TEST(LambdaBarGaussian, ClosedFormAndPole) {
  const auto g = MeasureFamily::product_gaussian();
  for (double s1 : {-2.0, 0.0, 0.3, 0.49}) {
    EXPECT_NEAR(lambda_bar_eval(g, s1, 0.25), -0.5 * std::log(1 - 2 * s1) + 0.25, 1e-10);
  }
  EXPECT_TRUE(std::isinf(lambda_bar_eval(g, 0.5, 0.0)));
}

TEST(LambdaCone, MatchesQuadratureOracle) {
  const double p = 3.0;
  const auto c = MeasureFamily::cone_lp(p);
  for (auto [s1, s2] : {std::pair{0.0, 0.0}, std::pair{1.0, 0.1}, std::pair{-2.5, -0.4},
                        std::pair{4.0, 0.3}, std::pair{12.0, 0.0}}) {
    const double shift = std::max(0.0, std::abs(s1) * std::sqrt(std::abs(s1)));
    const double oracle = log_expect(p, [&](double y) { return s1 * y + s2 * std::pow(std::abs(y), p); }, shift);
    EXPECT_NEAR(lambda_eval(c, s1, s2), oracle, 1e-8 * std::max(1.0, std::abs(oracle)))
        << s1 << "," << s2;
  }
}

TEST(LambdaCone, RadialSliceIsGammaLogMgf) {
  // |xi|^p / p ~ Gamma(1/p): Lambda(0, s2) = -(1/p) log(1 - p s2).
  for (double p : {1.5, 3.0, 4.0}) {
    const auto c = MeasureFamily::cone_lp(p);
    for (double s2 : {-2.0, 0.0, 0.1, 0.9 / p}) {
      EXPECT_NEAR(lambda_eval(c, 0.0, s2), -std::log(1 - p * s2) / p, 1e-9) << p;
    }
    EXPECT_TRUE(std::isinf(lambda_eval(c, 0.0, 1.0 / p)));
    EXPECT_TRUE(std::isinf(lambda_eval(c, 1.0, 2.0)));
  }
}

TEST(LambdaCustom, MatchesQuadratureAndIgnoresR) {
  const double p = 1.5;
  const auto f = MeasureFamily::product_custom(p);
  for (double s1 : {0.5, -1.2, 3.0}) {
    const double oracle = log_expect(p, [&](double y) { return s1 * y; }, std::pow(std::abs(s1), 3.0));
    EXPECT_NEAR(lambda_eval(f, s1, 0.4), oracle + 0.4, 1e-8 * std::max(1.0, std::abs(oracle)));
  }
}

TEST(LambdaBarCone, MatchesQuadratureOracle) {
  const double p = 3.0;
  const auto c = MeasureFamily::cone_lp(p);
  for (auto [s1, s2] : {std::pair{0.2, 0.0}, std::pair{-1.0, 0.2}, std::pair{2.0, -0.5}}) {
    const double shift = s1 > 0 ? s1 * s1 * s1 : 0.0;
    const double oracle = log_expect(p, [&](double y) { return s1 * y * y + s2 * std::pow(std::abs(y), p); }, shift);
    EXPECT_NEAR(lambda_bar_eval(c, s1, s2), oracle, 1e-8 * std::max(1.0, std::abs(oracle)));
  }
}

TEST(LambdaDerivatives, MatchFiniteDifferences) {
  const double h = 1e-5;
  for (const auto& fam : {MeasureFamily::cone_lp(3.0), MeasureFamily::product_custom(2.5)}) {
    for (auto [s1, s2] : {std::pair{0.8, 0.05}, std::pair{-1.7, -0.3}}) {
      const auto e = lambda_full(fam, s1, s2, Order::Hessian);
      const double d1 = (lambda_eval(fam, s1 + h, s2) - lambda_eval(fam, s1 - h, s2)) / (2 * h);
      const double d2 = (lambda_eval(fam, s1, s2 + h) - lambda_eval(fam, s1, s2 - h)) / (2 * h);
      EXPECT_NEAR(e.grad(0), d1, 1e-6);
      EXPECT_NEAR(e.grad(1), d2, 1e-6);
      const auto ep = lambda_full(fam, s1 + h, s2, Order::Gradient);
      const auto em = lambda_full(fam, s1 - h, s2, Order::Gradient);
      EXPECT_NEAR(e.hess(0, 0), (ep.grad(0) - em.grad(0)) / (2 * h), 1e-5);
      EXPECT_NEAR(e.hess(1, 0), (ep.grad(1) - em.grad(1)) / (2 * h), 1e-5);
      EXPECT_NEAR(e.hess(0, 1), e.hess(1, 0), 1e-12);
    }
  }
}

TEST(LambdaBar, InfiniteSlopeRegionForConeP2) {
  // With p = 2 the cone's Lambda-bar is finite iff s1 + s2 < 1/2.
  const auto c = MeasureFamily::cone_lp(2.0);
  EXPECT_TRUE(std::isfinite(lambda_bar_eval(c, 0.2, 0.2)));
  EXPECT_TRUE(std::isinf(lambda_bar_eval(c, 0.3, 0.2)));
  EXPECT_NEAR(lambda_bar_eval(c, 0.1, 0.1), -0.5 * std::log(1 - 2 * 0.2), 1e-9);
}

TEST(LogMGF, FunctionObjectDelegates) {
  const LogMGF l(MeasureFamily::cone_lp(3.0));
  EXPECT_DOUBLE_EQ(l.domain_bound(), 1.0 / 3.0);
  EXPECT_EQ(l(0.3, 0.1), lambda_eval(MeasureFamily::cone_lp(3.0), 0.3, 0.1));
}
