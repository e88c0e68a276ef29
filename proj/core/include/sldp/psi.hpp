#pragma once

#include "sldp/common.hpp"
#include "sldp/family.hpp"
#include "sldp/log_mgf.hpp"
#include "sldp/measures.hpp"

#include <variant>

namespace sldp {

/// The measure nu integrated against in Psi_nu: Gaussian or discrete.
class NuSpec {
 public:
  static NuSpec standard(int k) { return NuSpec(GaussianMeasure::standard(k)); }
  static NuSpec gaussian(GaussianMeasure g) { return NuSpec(std::move(g)); }
  static NuSpec discrete(EmpiricalMeasure m) { return NuSpec(std::move(m)); }

  bool is_gaussian() const { return std::holds_alternative<GaussianMeasure>(nu_); }
  const GaussianMeasure& as_gaussian() const { return std::get<GaussianMeasure>(nu_); }
  const EmpiricalMeasure& as_discrete() const { return std::get<EmpiricalMeasure>(nu_); }
  int dim() const;

 private:
  explicit NuSpec(GaussianMeasure g) : nu_(std::move(g)) {}
  explicit NuSpec(EmpiricalMeasure m) : nu_(std::move(m)) {}

  std::variant<GaussianMeasure, EmpiricalMeasure> nu_;
};

/// Psi_nu(t1, t2) = int Lambda(<t1, x>, t2) nu(dx). For Gaussian nu the
/// integral reduces to the 1D law of <t1, X> and uses Gauss-Hermite
/// quadrature with a fixed node count.
class Psi {
 public:
  Psi(MeasureFamily family, NuSpec nu, int hermite_nodes = 64);

  int dim() const { return nu_.dim(); }
  const MeasureFamily& family() const { return family_; }
  const NuSpec& nu() const { return nu_; }
  int hermite_nodes() const { return nodes_; }
  void set_hermite_nodes(int n) { nodes_ = n; }

  /// Value and derivatives in (t1, t2); the gradient has k + 1 entries with
  /// the t2-derivative last. +inf iff t2 >= T.
  Evaluation evaluate(const Vec& t1, double t2, Order order) const;
  double operator()(const Vec& t1, double t2) const { return evaluate(t1, t2, Order::Value).value; }

 private:
  Evaluation evaluate_discrete(const Vec& t1, double t2, Order order) const;
  Evaluation evaluate_gaussian(const Vec& t1, double t2, Order order) const;

  MeasureFamily family_;
  NuSpec nu_;
  int nodes_;
};

/// Hermite node counts tried when refining: 64, 128, 256.
inline constexpr int kMinHermiteNodes = 64;
inline constexpr int kMaxHermiteNodes = 256;

/// Psi_nu(t1, t2) with Gauss-Hermite refinement (node count doubled until
/// the value changes by less than 1e-10, at most 256 nodes).
double psi_eval(const NuSpec& nu, const MeasureFamily& family, const Vec& t1, double t2);

}  // namespace sldp
