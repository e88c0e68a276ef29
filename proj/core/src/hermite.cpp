#include "sldp/numerics/hermite.hpp"

#include "sldp/common.hpp"

#include <Eigen/Eigenvalues>

#include <map>
#include <memory>
#include <mutex>

namespace sldp::numerics {
namespace {

HermiteRule build_rule(int n) {
  // Jacobi matrix of the probabilists' Hermite polynomials: zero diagonal,
  // off-diagonal sqrt(i).
  Vec diag = Vec::Zero(n);
  Vec sub(n - 1);
  for (int i = 1; i < n; ++i) sub(i - 1) = std::sqrt(static_cast<double>(i));
  Eigen::SelfAdjointEigenSolver<Mat> solver;
  solver.computeFromTridiagonal(diag, sub, Eigen::ComputeEigenvectors);

  HermiteRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  double total = 0.0;
  for (int i = 0; i < n; ++i) {
    rule.nodes[i] = solver.eigenvalues()(i);
    const double v0 = solver.eigenvectors()(0, i);
    rule.weights[i] = v0 * v0;
    total += rule.weights[i];
  }
  // Exact symmetry, and weights normalized to a probability rule.
  for (int i = 0; i < n / 2; ++i) {
    const double z = 0.5 * (rule.nodes[n - 1 - i] - rule.nodes[i]);
    const double w = 0.5 * (rule.weights[n - 1 - i] + rule.weights[i]);
    rule.nodes[i] = -z;
    rule.nodes[n - 1 - i] = z;
    rule.weights[i] = rule.weights[n - 1 - i] = w;
  }
  if (n % 2 == 1) rule.nodes[n / 2] = 0.0;
  for (double& w : rule.weights) w /= total;
  return rule;
}

}  // namespace

const HermiteRule& hermite_rule(int n) {
  if (n < 1) throw ValidationError("Gauss-Hermite rule needs at least one node");
  static std::mutex mutex;
  static std::map<int, std::unique_ptr<HermiteRule>> cache;
  std::lock_guard lock(mutex);
  auto& slot = cache[n];
  if (!slot) slot = std::make_unique<HermiteRule>(build_rule(n));
  return *slot;
}

}  // namespace sldp::numerics
