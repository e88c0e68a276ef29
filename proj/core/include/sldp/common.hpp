#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace sldp {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

/// Extended reals are plain doubles; +inf is a value, not an error.
inline constexpr double kInf = std::numeric_limits<double>::infinity();

inline bool is_finite(double v) { return std::isfinite(v); }

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid parameters or malformed input (maps to CLI exit code 2).
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// A matrix factorization met a (numerically) singular or rank-deficient input.
class DegenerateInputError : public Error {
 public:
  using Error::Error;
};

/// The requested evaluation is outside the supported mathematical domain.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A numerical routine did not converge. Carries the best value it reached.
class NumericError : public Error {
 public:
  NumericError(const std::string& what, double partial)
      : Error(what), partial_(partial) {}
  double partial_value() const { return partial_; }

 private:
  double partial_;
};

/// Value, gradient and Hessian of a smooth function at a point. The gradient
/// and Hessian are left empty when only the value was requested.
struct Evaluation {
  double value = 0.0;
  Vec grad;
  Mat hess;
};

}  // namespace sldp
