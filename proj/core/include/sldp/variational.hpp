#pragma once

#include "sldp/rates.hpp"

#include <vector>

namespace sldp {

/// Search over centered Gaussians N(0, S) with S <= I, parametrized as
/// S = R diag(exp(min(u, 0))) R^T where R is a fixed rotation whose first
/// column is aligned with the query vector.
struct GaussianSearch {
  SolverConfig solver;
  std::vector<double> starts{0.0, -0.3, -1.0};  // u = s * (1, ..., 1)
  double step = 0.5;
  double fTol = 1e-11;
  double xTol = 1e-6;
  int maxEvaluations = 600;
};

struct VariationalResult {
  double jan = kInf;       // J^an(x)
  double rhs_upper = kInf; // min over the Gaussian subfamily: an upper bound
  GaussianMeasure argmin = GaussianMeasure::standard(1);
  Vec sigma2;              // eigenvalues of the argmin covariance, aligned frame
  double jqu_standard = kInf;  // J^qu at nu = standard Gaussian
  bool converged = false;
  int evaluations = 0;
};

/// inf over the Gaussian subfamily of J^qu_nu(x) + H_k(nu). Since the
/// subfamily is a restriction of the infimum over all measures, the value
/// is an upper bound on it.
VariationalResult variational_rhs(const MeasureFamily& family, const Vec& x,
                                  const GaussianSearch& search = {});

struct PhiResult {
  double lower = -kInf;  // sup over the Gaussian subfamily: a lower bound
  GaussianMeasure argmax = GaussianMeasure::standard(1);
  Vec sigma2;
  bool converged = false;
  int evaluations = 0;
};

/// sup over the Gaussian subfamily of Psi_nu(t1, t2) - H_k(nu).
PhiResult phi_eval(const MeasureFamily& family, const Vec& t1, double t2,
                   const GaussianSearch& search = {});

/// Rotation with first column v / ||v|| (identity for v = 0).
Mat aligned_rotation(const Vec& v);

struct ReducedEntropy {
  double value = kInf;
  Vec m_diag;
  bool converged = false;
};

/// inf over diagonal positive M of J_k(law of X Gamma(M), M) for X ~ nu,
/// which recovers H_k(nu).
ReducedEntropy reduced_entropy(const GaussianMeasure& nu, const GaussianSearch& search = {});

}  // namespace sldp
