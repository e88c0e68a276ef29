#pragma once

#include <vector>

namespace sldp::numerics {

/// Gauss-Hermite rule for the standard normal weight: sum w_i f(z_i)
/// approximates E f(Z), Z ~ N(0, 1). Nodes are sorted ascending and
/// symmetric; weights sum to 1.
struct HermiteRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// Cached rule with `n` nodes (Golub-Welsch). Thread-safe.
const HermiteRule& hermite_rule(int n);

}  // namespace sldp::numerics
