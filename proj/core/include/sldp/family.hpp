#pragma once

#include <optional>
#include <string>
#include <string_view>

namespace sldp {

/// Which high-dimensional law X^(n) a family describes.
///  - ProductGaussian: i.i.d. standard normal coordinates.
///  - ProductCustom:   i.i.d. generalized p-normal coordinates (density
///                     proportional to exp(-|y|^p / p)).
///  - ConeLp:          cone measure on the sphere {sum |x_i|^p = n}.
///  - BallLp:          uniform law on the ball {sum |x_i|^p <= n}.
enum class FamilyKind { ProductGaussian, ProductCustom, ConeLp, BallLp };

/// The function r in X = xi * rho(mean r(xi)).
enum class RKind { One, AbsPow };
/// The function rho.
enum class RhoKind { One, InversePow };

std::string_view to_string(FamilyKind kind);
FamilyKind family_kind_from_string(std::string_view name);

/// Descriptor of X^(n) = xi^(n) * rho((1/n) sum r(xi_i)) with i.i.d. xi.
/// Immutable once built; construction validates parameters.
class MeasureFamily {
 public:
  static MeasureFamily product_gaussian();
  static MeasureFamily product_custom(double p);
  static MeasureFamily cone_lp(double p);
  static MeasureFamily ball_lp(double p);

  /// General factory. `p` is ignored for ProductGaussian. A missing `q_star`
  /// takes the family default.
  static MeasureFamily make(FamilyKind kind, double p, std::optional<double> q_star = {});

  FamilyKind kind() const { return kind_; }
  /// Exponent of the generalized p-normal law of xi (2 for the Gaussian).
  double p() const { return p_; }
  double q_star() const { return q_star_; }
  /// Sup of the second log-mgf argument: D_Lambda = R x (-inf, T).
  double domain_bound() const;

  RKind r_kind() const;
  RhoKind rho_kind() const;
  bool r_is_one() const { return r_kind() == RKind::One; }

  double r(double x) const;
  double rho(double y) const;

  /// Mean and standard deviation of r(xi).
  double mean_r() const;
  double sd_r() const;

  /// Lambda and Lambda-bar have closed forms (Gaussian base law, r = 1).
  bool closed_form() const { return kind_ == FamilyKind::ProductGaussian; }

  /// Short display name such as "cone-lp(3)".
  std::string name() const;

  static double default_q_star(FamilyKind kind, double p);

  friend bool operator==(const MeasureFamily&, const MeasureFamily&) = default;

 private:
  MeasureFamily(FamilyKind kind, double p, double q_star);

  FamilyKind kind_;
  double p_;
  double q_star_;
};

}  // namespace sldp
