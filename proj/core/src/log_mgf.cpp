#include "sldp/log_mgf.hpp"

#include "sldp/numerics/tilted.hpp"
#include "sldp/samplers.hpp"

#include <cmath>
#include <sstream>

namespace sldp {

namespace {

Evaluation infinite() { return Evaluation{kInf, {}, {}}; }

Evaluation pack(double value, double g1, double g2, double h11, double h12, double h22,
                Order order) {
  Evaluation e{value, {}, {}};
  if (order >= Order::Gradient) e.grad = Vec{{g1, g2}};
  if (order >= Order::Hessian) e.hess = Mat{{h11, h12}, {h12, h22}};
  return e;
}

Evaluation from_moments(const numerics::TiltedMoments& m, double log_norm, bool r_is_one,
                        double s1, double s2, Order order, const char* what) {
  const double value = m.log_mass - log_norm + (r_is_one ? s2 : 0.0);
  if (!m.converged) {
    std::ostringstream os;
    os.precision(17);
    os << what << "(" << s1 << ", " << s2 << "): quadrature did not reach the requested accuracy";
    throw NumericError(os.str(), value);
  }
  if (r_is_one) return pack(value, m.mean1, 1.0, m.cov11, 0.0, 0.0, order);
  return pack(value, m.mean1, m.mean2, m.cov11, m.cov12, m.cov22, order);
}

// (1+u)^p minus its binomial expansion through u^m. Near u = 0 the series is
// summed directly because the closed form cancels.
double pow_excess(double u, double p, int m) {
  if (std::abs(u) >= 0.5) {
    double poly = 1.0, coef = 1.0, upow = 1.0;
    for (int j = 1; j <= m; ++j) {
      coef *= (p - (j - 1)) / j;
      upow *= u;
      poly += coef * upow;
    }
    return std::pow(1.0 + u, p) - poly;
  }
  double term = 1.0;
  for (int j = 1; j <= m; ++j) term *= (p - (j - 1)) / j * u;
  double sum = 0.0;
  for (int j = m; j < 400; ++j) {
    term *= (p - j) / (j + 1) * u;
    sum += term;
    if (std::abs(term) <= 1e-17 * std::abs(sum)) break;
  }
  return sum;
}

// Exponents near the peak are written as multiples of |peak|^p times a
// function of u = |y| / |peak| - 1, so that g(y) - g(peak) keeps full
// relative accuracy even when g(peak) is huge (s2 close to T, |s1| large).

// g(y) = s1 y - a |y|^p; at the peak s1 = a p |c|^{p-1} sign(c).
numerics::TiltedProblem lambda_problem(double s1, double a, double p) {
  numerics::TiltedProblem prob;
  const double c = s1 == 0.0 ? 0.0 : std::copysign(std::pow(std::abs(s1) / (a * p), 1.0 / (p - 1.0)), s1);
  const double cp = std::pow(std::abs(c), p);
  const double g_peak = s1 * c - a * cp;
  prob.peak = c;
  prob.log_peak = g_peak;
  prob.stats_at_peak = {c, cp};
  prob.log_density = [=](double y) {
    if (c != 0.0 && y * c > 0.0) {
      const double u = (std::abs(y) - std::abs(c)) / std::abs(c);
      return -a * cp * pow_excess(u, p, 1);
    }
    return (s1 * y - a * std::pow(std::abs(y), p)) - g_peak;
  };
  prob.stats = [=](double y) {
    if (c != 0.0 && y * c > 0.0) {
      const double u = (std::abs(y) - std::abs(c)) / std::abs(c);
      return std::pair{y - c, cp * std::expm1(p * std::log1p(u))};
    }
    return std::pair{y - c, std::pow(std::abs(y), p) - cp};
  };
  return prob;
}

// g(y) = s1 y^2 - a y^p on [0, inf); an interior peak c has 2 s1 = a p c^{p-2}.
numerics::TiltedProblem lambda_bar_problem(double s1, double a, double p) {
  numerics::TiltedProblem prob;
  prob.half_line = true;
  const double ratio = 2.0 * s1 / (a * p);
  const double c = ratio > 0.0 ? std::pow(ratio, 1.0 / (p - 2.0)) : 0.0;
  const double cp = std::pow(c, p);
  const double g_peak = s1 * c * c - a * cp;
  prob.peak = c;
  prob.log_peak = g_peak;
  prob.stats_at_peak = {c * c, cp};
  prob.log_density = [=](double y) {
    y = std::abs(y);
    if (c > 0.0) {
      const double u = (y - c) / c;
      return -a * cp * (pow_excess(u, p, 2) + 0.5 * p * (p - 2.0) * u * u);
    }
    return s1 * y * y - a * std::pow(y, p);
  };
  prob.stats = [=](double y) {
    y = std::abs(y);
    if (c > 0.0) {
      const double u = (y - c) / c;
      return std::pair{c * c * u * (2.0 + u), cp * std::expm1(p * std::log1p(u))};
    }
    return std::pair{y * y, std::pow(y, p)};
  };
  return prob;
}

}  // namespace

Evaluation lambda_full(const MeasureFamily& family, double s1, double s2, Order order) {
  if (!std::isfinite(s1) || std::isnan(s2)) throw ValidationError("lambda: non-finite argument");
  if (s2 >= family.domain_bound()) return infinite();
  const double p = family.p();

  if (family.r_is_one() && p == 2.0) {
    return pack(0.5 * s1 * s1 + s2, s1, 1.0, 1.0, 0.0, 0.0, order);
  }
  if (!family.r_is_one() && p == 2.0) {
    // xi ~ N(0,1), r = xi^2: a Gaussian integral with precision 1 - 2 s2.
    const double b = 1.0 - 2.0 * s2;
    const double v = s1 * s1 / (2.0 * b) - 0.5 * std::log(b);
    return pack(v, s1 / b, s1 * s1 / (b * b) + 1.0 / b, 1.0 / b, 2.0 * s1 / (b * b),
                4.0 * s1 * s1 / (b * b * b) + 2.0 / (b * b), order);
  }

  const double a = family.r_is_one() ? 1.0 / p : 1.0 / p - s2;
  const auto m = numerics::tilted_moments(lambda_problem(s1, a, p));
  return from_moments(m, p_normal_log_normalizer(p), family.r_is_one(), s1, s2, order, "lambda");
}

double lambda_eval(const MeasureFamily& family, double s1, double s2) {
  return lambda_full(family, s1, s2, Order::Value).value;
}

Evaluation lambda_bar_full(const MeasureFamily& family, double s1, double s2, Order order) {
  if (std::isnan(s1) || std::isnan(s2)) throw ValidationError("lambda_bar: NaN argument");
  if (s2 >= family.domain_bound()) return infinite();
  const double p = family.p();

  if (family.r_is_one() && p == 2.0) {
    if (s1 >= 0.5) return infinite();
    const double b = 1.0 - 2.0 * s1;
    return pack(-0.5 * std::log(b) + s2, 1.0 / b, 1.0, 2.0 / (b * b), 0.0, 0.0, order);
  }
  if (!family.r_is_one() && p == 2.0) {
    const double b = 1.0 - 2.0 * (s1 + s2);
    if (b <= 0.0) return infinite();
    const double g = 1.0 / b, h = 2.0 / (b * b);
    return pack(-0.5 * std::log(b), g, g, h, h, h, order);
  }

  const double a = family.r_is_one() ? 1.0 / p : 1.0 / p - s2;
  // Finiteness is decided by the dominant power at infinity.
  if (p > 2.0 && a <= 0.0) return infinite();
  if (p < 2.0 && (s1 > 0.0 || (s1 == 0.0 && a <= 0.0))) return infinite();

  const auto m = numerics::tilted_moments(lambda_bar_problem(s1, a, p));
  return from_moments(m, p_normal_log_normalizer(p), family.r_is_one(), s1, s2, order,
                      "lambda_bar");
}

double lambda_bar_eval(const MeasureFamily& family, double s1, double s2) {
  return lambda_bar_full(family, s1, s2, Order::Value).value;
}

}  // namespace sldp
