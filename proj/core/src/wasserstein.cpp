#include "sldp/wasserstein.hpp"

#include <boost/math/distributions/normal.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include <algorithm>
#include <cmath>
#include <numeric>

namespace sldp {

namespace {

void check_q(double q) {
  if (!(q > 0.0 && q <= 2.0)) throw ValidationError("Wasserstein order q must lie in (0, 2]");
}

double finish(double cost, double q) { return q >= 1.0 ? std::pow(cost, 1.0 / q) : cost; }

}  // namespace

Wasserstein1d wasserstein_1d(std::span<const double> x, std::span<const double> y, double q) {
  check_q(q);
  if (x.empty() || y.empty()) throw ValidationError("wasserstein_1d needs non-empty samples");
  if (x.size() == y.size()) {
    double cost = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) cost += std::pow(std::abs(x[i] - y[i]), q);
    return {finish(cost / static_cast<double>(x.size()), q), false};
  }
  std::vector<double> wx(x.size(), 1.0 / static_cast<double>(x.size()));
  std::vector<double> wy(y.size(), 1.0 / static_cast<double>(y.size()));
  return {wasserstein_1d_weighted(x, wx, y, wy, q), true};
}

double wasserstein_1d_weighted(std::span<const double> x, std::span<const double> wx,
                               std::span<const double> y, std::span<const double> wy, double q) {
  check_q(q);
  if (x.size() != wx.size() || y.size() != wy.size() || x.empty() || y.empty()) {
    throw ValidationError("wasserstein_1d_weighted: sizes disagree");
  }
  // Walk both quantile functions over the merged cumulative-weight breakpoints.
  std::size_t i = 0, j = 0;
  double left_x = wx[0], left_y = wy[0], cost = 0.0;
  while (i < x.size() && j < y.size()) {
    const double mass = std::min(left_x, left_y);
    cost += mass * std::pow(std::abs(x[i] - y[j]), q);
    left_x -= mass;
    left_y -= mass;
    if (left_x <= 1e-15) {
      if (++i < x.size()) left_x += wx[i];
    }
    if (left_y <= 1e-15) {
      if (++j < y.size()) left_y += wy[j];
    }
  }
  return finish(cost, q);
}

std::vector<double> gaussian_quantile_grid(int n) {
  const boost::math::normal_distribution<double> z;
  std::vector<double> out(n);
  for (int i = 0; i < n; ++i) out[i] = boost::math::quantile(z, (i + 0.5) / n);
  return out;
}

double gaussian_norm_moment(int k, double q) {
  return std::exp(0.5 * q * std::log(2.0) + boost::math::lgamma(0.5 * (k + q)) -
                  boost::math::lgamma(0.5 * k));
}

GaussianDistance wasserstein_to_gaussian(const EmpiricalMeasure& m, double q, int n_directions,
                                         RngStream& rng) {
  if (!(q > 0.0 && q < 2.0)) throw ValidationError("wasserstein_to_gaussian needs q in (0, 2)");
  if (n_directions < 1) throw ValidationError("need at least one direction");
  const int n = m.size(), k = m.dim();
  const auto grid = gaussian_quantile_grid(n);
  const std::vector<double> grid_w(n, 1.0 / n);

  std::vector<int> order(n);
  std::vector<double> proj(n), xs(n), ws(n);
  double sliced = 0.0;
  for (int d = 0; d < n_directions; ++d) {
    Vec theta(k);
    do {
      for (int c = 0; c < k; ++c) theta(c) = rng.normal();
    } while (theta.norm() == 0.0);
    theta.normalize();
    const Vec p = m.points() * theta;
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int a, int b) { return p(a) < p(b); });
    for (int i = 0; i < n; ++i) {
      xs[i] = p(order[i]);
      ws[i] = m.weights()(order[i]);
    }
    sliced += m.uniform_weights() ? wasserstein_1d(xs, grid, q).value
                                  : wasserstein_1d_weighted(xs, ws, grid, grid_w, q);
  }
  GaussianDistance out;
  out.sliced = sliced / n_directions;
  out.moment_gap = std::abs(m.norm_moment(q) - gaussian_norm_moment(k, q));
  out.total = out.sliced + out.moment_gap;
  return out;
}

namespace {

// Minimum-cost perfect assignment (shortest augmenting paths with potentials).
double assignment_cost(const Mat& c) {
  const int n = static_cast<int>(c.rows());
  std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0), minv(n + 1);
  std::vector<int> p(n + 1, 0), way(n + 1, 0);
  std::vector<char> used(n + 1);
  for (int i = 1; i <= n; ++i) {
    p[0] = i;
    int j0 = 0;
    std::fill(minv.begin(), minv.end(), kInf);
    std::fill(used.begin(), used.end(), 0);
    do {
      used[j0] = 1;
      const int i0 = p[j0];
      double delta = kInf;
      int j1 = 0;
      for (int j = 1; j <= n; ++j) {
        if (used[j]) continue;
        const double cur = c(i0 - 1, j - 1) - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (int j = 0; j <= n; ++j) {
        if (used[j]) {
          u[p[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (p[j0] != 0);
    do {
      const int j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0 != 0);
  }
  double total = 0.0;
  for (int j = 1; j <= n; ++j) total += c(p[j] - 1, j - 1);
  return total;
}

}  // namespace

double exact_wasserstein(const EmpiricalMeasure& a, const EmpiricalMeasure& b, double q) {
  check_q(q);
  if (a.size() != b.size() || a.dim() != b.dim()) {
    throw ValidationError("exact_wasserstein needs equal sizes and dimensions");
  }
  if (a.size() > 512) throw ValidationError("exact_wasserstein is limited to 512 points");
  if (!a.uniform_weights() || !b.uniform_weights()) {
    throw ValidationError("exact_wasserstein needs uniform weights");
  }
  const int n = a.size();
  Mat c(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) c(i, j) = std::pow((a.points().row(i) - b.points().row(j)).norm(), q);
  return finish(assignment_cost(c) / n, q);
}

}  // namespace sldp
