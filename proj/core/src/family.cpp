#include "sldp/family.hpp"

#include "sldp/common.hpp"

#include <cmath>
#include <sstream>

namespace sldp {

std::string_view to_string(FamilyKind kind) {
  switch (kind) {
    case FamilyKind::ProductGaussian: return "product-gaussian";
    case FamilyKind::ProductCustom: return "product-custom";
    case FamilyKind::ConeLp: return "cone-lp";
    case FamilyKind::BallLp: return "ball-lp";
  }
  return "unknown";
}

FamilyKind family_kind_from_string(std::string_view name) {
  if (name == "product-gaussian") return FamilyKind::ProductGaussian;
  if (name == "product-custom") return FamilyKind::ProductCustom;
  if (name == "cone-lp") return FamilyKind::ConeLp;
  if (name == "ball-lp") return FamilyKind::BallLp;
  throw ValidationError("unknown family kind '" + std::string(name) + "'");
}

double MeasureFamily::default_q_star(FamilyKind kind, double p) {
  if (kind == FamilyKind::ProductGaussian || p <= 2.0) return 2.0;
  return p / (p - 1.0);
}

MeasureFamily::MeasureFamily(FamilyKind kind, double p, double q_star)
    : kind_(kind), p_(p), q_star_(q_star) {}

MeasureFamily MeasureFamily::make(FamilyKind kind, double p, std::optional<double> q_star) {
  if (kind == FamilyKind::ProductGaussian) p = 2.0;
  if (!(p > 1.0) || !std::isfinite(p)) {
    throw ValidationError("family exponent p must lie in (1, inf)");
  }
  const double q = q_star.value_or(default_q_star(kind, p));
  if (!(q > 0.0 && q <= 2.0)) throw ValidationError("qStar must lie in (0, 2]");
  return MeasureFamily(kind, p, q);
}

MeasureFamily MeasureFamily::product_gaussian() { return make(FamilyKind::ProductGaussian, 2.0); }
MeasureFamily MeasureFamily::product_custom(double p) { return make(FamilyKind::ProductCustom, p); }
MeasureFamily MeasureFamily::cone_lp(double p) { return make(FamilyKind::ConeLp, p); }
MeasureFamily MeasureFamily::ball_lp(double p) { return make(FamilyKind::BallLp, p); }

double MeasureFamily::domain_bound() const { return r_is_one() ? kInf : 1.0 / p_; }

RKind MeasureFamily::r_kind() const {
  return (kind_ == FamilyKind::ConeLp || kind_ == FamilyKind::BallLp) ? RKind::AbsPow : RKind::One;
}

RhoKind MeasureFamily::rho_kind() const {
  return r_is_one() ? RhoKind::One : RhoKind::InversePow;
}

double MeasureFamily::r(double x) const {
  return r_is_one() ? 1.0 : std::pow(std::abs(x), p_);
}

double MeasureFamily::rho(double y) const {
  return r_is_one() ? 1.0 : std::pow(y, -1.0 / p_);
}

// |xi|^p / p ~ Gamma(1/p, 1), so E r = 1 and Var r = p.
double MeasureFamily::mean_r() const { return 1.0; }
double MeasureFamily::sd_r() const { return r_is_one() ? 0.0 : std::sqrt(p_); }

std::string MeasureFamily::name() const {
  if (kind_ == FamilyKind::ProductGaussian) return std::string(to_string(kind_));
  std::ostringstream os;
  os << to_string(kind_) << '(' << p_ << ')';
  return os.str();
}

}  // namespace sldp
