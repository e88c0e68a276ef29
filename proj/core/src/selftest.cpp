#include "sldp/selftest.hpp"

#include "sldp/log_mgf.hpp"
#include "sldp/mcverify.hpp"
#include "sldp/measures.hpp"
#include "sldp/rates.hpp"
#include "sldp/samplers.hpp"
#include "sldp/variational.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <map>
#include <sstream>

namespace sldp {

namespace {

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(4);
  os << v;
  return os.str();
}

using Check = CheckResult (*)(const SelfTestOptions&);

CheckResult haar_bartlett(const SelfTestOptions& o) {
  const auto start = std::chrono::steady_clock::now();
  const ChiReport rep = chi_moment_check(10, 3, 10000, RngStream(o.seed, 1));
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  CheckResult r;
  r.pass = rep.pass && rep.maxGramError <= 1e-10 && secs < 10.0;
  r.detail = "max|A^T A - I|_F " + fmt(rep.maxGramError) + ", E R_ii^2 = (" + fmt(rep.mean(0)) + ", " +
             fmt(rep.mean(1)) + ", " + fmt(rep.mean(2)) + "), max|z| " + fmt(rep.z.cwiseAbs().maxCoeff());
  return r;
}

CheckResult gamma_map_check(const SelfTestOptions& o) {
  RngStream rng(o.seed, 2);
  double worst_spd = 0.0;
  for (int t = 0; t < 100; ++t) {
    const int k = 1 + t % 8;
    const Mat b = gaussian_matrix(k + 2, k, rng);
    const Mat m = b.transpose() * b + 0.1 * Mat::Identity(k, k);
    const Mat g = gamma_map(SymMatrix::from_dense(0.5 * (m + m.transpose())));
    worst_spd = std::max(worst_spd, (g.transpose() * g - m).norm() / m.norm());
  }
  double worst_qr = 0.0;
  const int n = 200, k = 4;
  for (int t = 0; t < 100; ++t) {
    const Mat z = gaussian_matrix(n, k, rng);
    const BartlettPair qr = bartlett_qr(z);
    const Mat g = gamma_map(covariance(row_empirical(z)));
    worst_qr = std::max(worst_qr, (qr.r / std::sqrt(static_cast<double>(n)) - g).norm());
  }
  CheckResult r;
  r.pass = worst_spd <= 1e-12 && worst_qr <= 1e-9;
  r.detail = "SPD relative residual " + fmt(worst_spd) + ", |R/sqrt(n) - Gamma(C(L^Z))|_F " + fmt(worst_qr);
  return r;
}

CheckResult trace_identity(const SelfTestOptions& o) {
  RngStream rng(o.seed, 3);
  double worst = 0.0;
  int frames = 0;
  for (int n : {5, 20, 100, 1000}) {
    for (int k = 1; k <= std::min(4, n - 1); ++k) {
      for (int t = 0; t < 25; ++t, ++frames) {
        const StiefelFrame a = haar_stiefel(n, k, rng);
        worst = std::max(worst, std::abs(k - covariance(row_empirical(a)).trace()));
      }
    }
  }
  CheckResult r;
  r.pass = worst <= 1e-10;
  r.detail = std::to_string(frames) + " frames, max |tr(I - C(L))| " + fmt(worst);
  return r;
}

CheckResult gaussian_rates(const SelfTestOptions&) {
  const auto start = std::chrono::steady_clock::now();
  const MeasureFamily g = MeasureFamily::product_gaussian();
  double worst_qu = 0.0, worst_an = 0.0;
  for (int k = 1; k <= 3; ++k) {
    const Vec u = Vec::Ones(k) / std::sqrt(static_cast<double>(k));
    for (int i = 0; i <= 40; ++i) {
      const double radius = 0.05 * i;
      const Vec x = radius * u;
      const double exact = 0.5 * radius * radius;
      worst_qu = std::max(worst_qu, std::abs(j_quenched(g, NuSpec::standard(k), x).value - exact));
      worst_an = std::max(worst_an, std::abs(j_annealed(g, x).value - exact));
    }
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  CheckResult r;
  r.pass = worst_qu <= 1e-6 && worst_an <= 1e-4 && secs < 60.0;
  r.detail = "max error quenched " + fmt(worst_qu) + ", annealed " + fmt(worst_an) + " over 123 points";
  return r;
}

CheckResult entropy_closed_form(const SelfTestOptions&) {
  double worst = 0.0;
  bool exact_zero = true, infinite = true;
  for (int k : {1, 2, 4}) {
    for (int i = 1; i <= 10; ++i) {
      const double s2 = 0.1 * i;
      const double h = hk_gaussian(GaussianMeasure::isotropic(k, s2));
      worst = std::max(worst, std::abs(h + 0.5 * k * std::log(s2)));
    }
    exact_zero = exact_zero && hk_gaussian(GaussianMeasure::standard(k)) == 0.0;
    infinite = infinite && std::isinf(hk_gaussian(GaussianMeasure::isotropic(k, 1.5)));
  }
  CheckResult r;
  r.pass = worst <= 1e-8 && exact_zero && infinite;
  r.detail = "max error " + fmt(worst) + (exact_zero ? ", H(gamma) = 0" : ", H(gamma) != 0") +
             (infinite ? ", H(N(0,1.5 I)) = inf" : ", H(N(0,1.5 I)) finite");
  return r;
}

CheckResult variational_bounds(const SelfTestOptions&) {
  bool pass = true;
  double worst_gap = 0.0, worst_sigma = 0.0, worst_cone = kInf;
  for (int k : {1, 2}) {
    for (double radius : {0.5, 1.0, 2.0}) {
      const Vec x = radius * Vec::Ones(k) / std::sqrt(static_cast<double>(k));
      const auto gv = variational_rhs(MeasureFamily::product_gaussian(), x);
      const double gap = std::abs(gv.rhs_upper - gv.jan);
      const double sig = (gv.sigma2.array() - 1.0).abs().maxCoeff();
      worst_gap = std::max(worst_gap, gap);
      worst_sigma = std::max(worst_sigma, sig);
      pass = pass && gap <= 1e-3 && sig <= 1e-2;

      const auto cv = variational_rhs(MeasureFamily::cone_lp(3.0), x);
      // One-sided: both are upper bounds on the annealed rate (inf >= inf holds).
      const bool ok = cv.rhs_upper >= cv.jan - 1e-6 && cv.jqu_standard >= cv.jan - 1e-6;
      if (std::isfinite(cv.jan)) {
        worst_cone = std::min(worst_cone, std::min(cv.rhs_upper, cv.jqu_standard) - cv.jan);
      }
      pass = pass && ok;
    }
  }
  CheckResult r;
  r.pass = pass;
  r.detail = "gaussian |rhs - jan| " + fmt(worst_gap) + ", max|sigma^2 - 1| " + fmt(worst_sigma) +
             ", cone-lp(3) min(upper - jan) " + fmt(worst_cone);
  return r;
}

CheckResult monotonicity(const SelfTestOptions& o) {
  double worst = 0.0;
  for (const auto& family : {MeasureFamily::cone_lp(3.0), MeasureFamily::product_gaussian()}) {
    double prev = -kInf;
    for (int i = 0; i <= 30; ++i) {
      const double v = j_quenched(family, NuSpec::standard(1), Vec::Constant(1, 0.03 * i)).value;
      if (prev > v) worst = std::max(worst, prev - v);
      prev = v;
    }
  }
  TailOptions opts;
  opts.jobs = o.jobs;
  const TailEvent ev = TailEvent::halfspace(Vec::Ones(1), 0.1);
  const auto cone = estimate_tail_rate(MeasureFamily::cone_lp(3.0), 1, ev, {400}, 100000,
                                       FrameMode::Annealed, RngStream(o.seed, 91), opts)[0];
  const auto ball = estimate_tail_rate(MeasureFamily::ball_lp(3.0), 1, ev, {400}, 100000,
                                       FrameMode::Annealed, RngStream(o.seed, 92), opts)[0];
  const double se = std::hypot(cone.stdErr, ball.stdErr);
  const double diff = std::abs(cone.logRate - ball.logRate);
  CheckResult r;
  r.pass = worst <= 1e-8 && diff <= 2.0 * se;
  r.detail = "max decrease " + fmt(worst) + "; tail rate cone " + fmt(cone.logRate) + " vs ball " +
             fmt(ball.logRate) + " (|diff| " + fmt(diff) + ", 2 SE " + fmt(2.0 * se) + ")";
  return r;
}

CheckResult growth_exponent(const SelfTestOptions&) {
  const MeasureFamily c = MeasureFamily::cone_lp(3.0);
  // Least-squares slope of log Lambda(s, 0) against log s on a log grid.
  constexpr int kPoints = 25;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (int i = 0; i < kPoints; ++i) {
    const double ls = std::log(10.0) + i * (std::log(1e4) - std::log(10.0)) / (kPoints - 1);
    const double ly = std::log(lambda_eval(c, std::exp(ls), 0.0));
    sx += ls;
    sy += ly;
    sxx += ls * ls;
    sxy += ls * ly;
  }
  const double slope = (kPoints * sxy - sx * sy) / (kPoints * sxx - sx * sx);
  CheckResult r;
  r.pass = slope >= 1.4 && slope <= 1.6;
  r.detail = "fitted exponent " + fmt(slope);
  return r;
}

const std::map<std::string, Check>& registry() {
  static const std::map<std::string, Check> m{
      {"haar-bartlett", haar_bartlett},         {"gamma-map", gamma_map_check},
      {"trace-identity", trace_identity},       {"gaussian-rates", gaussian_rates},
      {"entropy-closed-form", entropy_closed_form}, {"variational-bounds", variational_bounds},
      {"monotonicity", monotonicity},           {"growth-exponent", growth_exponent}};
  return m;
}

}  // namespace

const std::vector<std::string>& self_test_checks() {
  static const std::vector<std::string> names{"haar-bartlett",       "gamma-map",          "trace-identity",
                                              "gaussian-rates",      "entropy-closed-form", "variational-bounds",
                                              "monotonicity",        "growth-exponent"};
  return names;
}

CheckResult run_check(const std::string& name, const SelfTestOptions& options) {
  const auto it = registry().find(name);
  if (it == registry().end()) throw ValidationError("unknown self-test check '" + name + "'");
  const auto start = std::chrono::steady_clock::now();
  CheckResult r;
  try {
    r = it->second(options);
  } catch (const std::exception& e) {
    r.pass = false;
    r.detail = std::string("exception: ") + e.what();
  }
  r.name = name;
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return r;
}

std::vector<CheckResult> run_self_test(const SelfTestOptions& options,
                                       const std::function<void(const CheckResult&)>& on_result) {
  std::vector<std::string> names = options.only.empty() ? self_test_checks() : options.only;
  std::vector<CheckResult> out;
  for (const auto& n : names) {
    out.push_back(run_check(n, options));
    if (on_result) on_result(out.back());
  }
  return out;
}

}  // namespace sldp
