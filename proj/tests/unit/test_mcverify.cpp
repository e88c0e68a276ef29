#include "sldp/mcverify.hpp"
#include "sldp/log_mgf.hpp"

#include <gtest/gtest.h>

#include <boost/math/special_functions/erf.hpp>

#include <cmath>

using namespace sldp;

namespace {

// P(N(0, 1/n) >= t).
double gaussian_tail(int n, double t) { return 0.5 * boost::math::erfc(t * std::sqrt(n / 2.0)); }

}  // namespace

TEST(TailEvent, ContainsAndDominatingPoint) {
  const auto h = TailEvent::halfspace((Vec(2) << 3, 4).finished(), 0.5);
  EXPECT_NEAR(h.direction.norm(), 1.0, 1e-15);
  EXPECT_TRUE(h.contains((Vec(2) << 0.3, 0.4).finished()));
  EXPECT_FALSE(h.contains((Vec(2) << 0.3, 0.3).finished()));
  EXPECT_LT((h.dominating_point(2) - (Vec(2) << 0.3, 0.4).finished()).norm(), 1e-15);

  const auto outside = TailEvent::norm_ball(1.0, true);
  EXPECT_TRUE(outside.contains(Vec::Constant(2, 1.0)));
  EXPECT_FALSE(TailEvent::norm_ball(1.0, false).contains(Vec::Constant(2, 1.0)));
  EXPECT_NEAR(outside.dominating_point(3).norm(), 1.0, 1e-15);
  EXPECT_THROW(TailEvent::halfspace(Vec::Zero(2), 1.0), ValidationError);
}

TEST(FrameMode, RoundTripsNames) {
  EXPECT_EQ(frame_mode_from_string(to_string(FrameMode::Quenched)), FrameMode::Quenched);
  EXPECT_EQ(frame_mode_from_string(to_string(FrameMode::Annealed)), FrameMode::Annealed);
  EXPECT_THROW(frame_mode_from_string("frozen"), ValidationError);
}

TEST(TailRate, UntiltedMatchesExactGaussianTail) {
  const auto ev = TailEvent::halfspace(Vec::Ones(1), 0.3);
  const auto est = estimate_tail_rate(MeasureFamily::product_gaussian(), 1, ev, {50}, 100000,
                                      FrameMode::Quenched, RngStream(3))[0];
  const double exact = -std::log(gaussian_tail(50, 0.3)) / 50;
  EXPECT_FALSE(est.tilted);
  EXPECT_NEAR(est.logRate, exact, 4 * est.stdErr);
}

TEST(TailRate, TiltedAgreesWithUntilted) {
  const auto ev = TailEvent::halfspace((Vec(2) << 1, 1).finished(), 0.3);
  TailOptions tilt;
  tilt.tilt = true;
  for (const auto& fam : {MeasureFamily::product_gaussian(), MeasureFamily::cone_lp(3.0)}) {
    const auto plain = estimate_tail_rate(fam, 2, ev, {60}, 60000, FrameMode::Quenched, RngStream(4))[0];
    const auto tilted = estimate_tail_rate(fam, 2, ev, {60}, 60000, FrameMode::Quenched, RngStream(4), tilt)[0];
    EXPECT_TRUE(tilted.tilted);
    EXPECT_NEAR(plain.logRate, tilted.logRate, 3 * std::hypot(plain.stdErr, tilted.stdErr)) << fam.name();
    EXPECT_LT(tilted.stdErr, plain.stdErr);
  }
}

TEST(TailRate, TiltedDeepTailMatchesExact) {
  const auto ev = TailEvent::halfspace(Vec::Ones(1), 1.0);
  TailOptions tilt;
  tilt.tilt = true;
  const auto est = estimate_tail_rate(MeasureFamily::product_gaussian(), 1, ev, {400}, 20000,
                                      FrameMode::Annealed, RngStream(5), tilt)[0];
  EXPECT_NEAR(est.logRate, -std::log(gaussian_tail(400, 1.0)) / 400, 4 * est.stdErr + 1e-6);
  EXPECT_LT(est.pHat, 1e-80);
  EXPECT_GT(est.pHat, 0.0);
}

TEST(TailRate, ResultsIndependentOfJobs) {
  const auto ev = TailEvent::halfspace(Vec::Ones(1), 0.4);
  TailOptions a, b;
  a.tilt = b.tilt = true;
  a.batchSize = b.batchSize = 500;
  b.jobs = 3;
  const auto fam = MeasureFamily::cone_lp(3.0);
  const auto ra = estimate_tail_rate(fam, 1, ev, {30, 90}, 5000, FrameMode::Quenched, RngStream(6), a);
  const auto rb = estimate_tail_rate(fam, 1, ev, {30, 90}, 5000, FrameMode::Quenched, RngStream(6), b);
  for (int i = 0; i < 2; ++i) {
    EXPECT_EQ(ra[i].logRate, rb[i].logRate);
    EXPECT_EQ(ra[i].stdErr, rb[i].stdErr);
    EXPECT_EQ(ra[i].hits, rb[i].hits);
  }
}

TEST(TailRate, RefusesHopelessUntiltedRun) {
  const auto ev = TailEvent::halfspace(Vec::Ones(1), 1.0);
  EXPECT_THROW(estimate_tail_rate(MeasureFamily::product_gaussian(), 1, ev, {1600}, 1000,
                                  FrameMode::Quenched, RngStream(7)),
               DomainError);
}

TEST(TailRate, AnnealedTiltOnlyForGaussian) {
  TailOptions tilt;
  tilt.tilt = true;
  EXPECT_THROW(estimate_tail_rate(MeasureFamily::cone_lp(3.0), 1, TailEvent::halfspace(Vec::Ones(1), 0.3), {50},
                                  1000, FrameMode::Annealed, RngStream(8), tilt),
               DomainError);
  EXPECT_THROW(estimate_tail_rate(MeasureFamily::product_gaussian(), 1, TailEvent::norm_ball(1.0, true), {50},
                                  1000, FrameMode::Quenched, RngStream(8), tilt),
               DomainError);
}

TEST(TailRate, ZeroHitsReported) {
  const auto ev = TailEvent::norm_ball(0.01, false);
  const auto est = estimate_tail_rate(MeasureFamily::product_gaussian(), 3, ev, {20}, 200,
                                      FrameMode::Annealed, RngStream(9))[0];
  EXPECT_TRUE(est.zeroHits);
  EXPECT_TRUE(std::isinf(est.logRate));
}

TEST(Phi, ConditionalExactForGaussian) {
  for (int n : {20, 80}) {
    const auto e = phi_n_estimate(MeasureFamily::product_gaussian(), n, (Vec(2) << 0.3, 0.4).finished(), 0.1,
                                  200, RngStream(10));
    EXPECT_NEAR(e.value, 0.225, 1e-12);
    EXPECT_NEAR(e.stdErr, 0.0, 1e-12);
  }
}

TEST(Phi, ZeroDirectionIsRadialLogMgf) {
  const auto c = MeasureFamily::cone_lp(3.0);
  const auto e = phi_n_estimate(c, 40, Vec::Zero(1), 0.2, 50, RngStream(11));
  EXPECT_NEAR(e.value, lambda_eval(c, 0.0, 0.2), 1e-12);
}

TEST(Phi, JointEstimatorNearConditional) {
  const auto c = MeasureFamily::cone_lp(3.0);
  const Vec t1 = Vec::Constant(1, 0.3);
  const auto cond = phi_n_estimate(c, 10, t1, 0.0, 4000, RngStream(12));
  const auto joint = phi_n_estimate(c, 10, t1, 0.0, 200000, RngStream(12), true);
  EXPECT_FALSE(joint.conditional);
  EXPECT_NEAR(cond.value, joint.value, 4 * std::hypot(cond.stdErr, joint.stdErr) + 1e-4);
}

TEST(Chi, BartlettMomentsPass) {
  const auto rep = chi_moment_check(10, 3, 5000, RngStream(13));
  EXPECT_TRUE(rep.pass);
  EXPECT_LT(rep.maxGramError, 1e-12);
  for (int i = 0; i < 3; ++i) EXPECT_NEAR(rep.mean(i), 10 - i, 0.5);
  EXPECT_THROW(chi_moment_check(10, 3, 10, RngStream(13)), ValidationError);
}

TEST(Slln, DiagnosticShrinksAndTraceIsK) {
  const auto rows = slln_experiment(2, 1.0, {50, 2000}, 4, RngStream(14), 32);
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_GT(rows[0].mean, rows[1].mean);
  EXPECT_NEAR(rows[0].secondMoment, 2.0, 1e-10);
  EXPECT_NEAR(rows[1].secondMoment, 2.0, 1e-10);
}
