#ifndef SNROBUST_ASYMPTOTICS_HPP
#define SNROBUST_ASYMPTOTICS_HPP

#include <vector>

#include "snrobust/dpd.hpp"
#include "snrobust/linalg3.hpp"
#include "snrobust/skew_normal.hpp"

namespace snrobust {

// Sandwich covariance Sigma_alpha = J^{-1} K J^{-1} of the MDPDE.
struct AsymptoticCovariance {
  Mat3 j_matrix;
  Mat3 k_matrix;
  Mat3 sigma_matrix;
  double alpha;
  SnParams at_theta;
};

// Condition diagnostics carried alongside a (possibly shaky) covariance.
struct CovarianceDiagnostics {
  AsymptoticCovariance cov;
  double j_condition;
  bool well_conditioned;  // j_condition <= guard
};

inline constexpr double kConditionGuard = 1e10;

// N_alpha^{(ij)} = int u_i u_j f^{alpha+1} dx by standardized quadrature.
// Indices are 1-based with 1 <= i <= j <= 3.
double n_integral(const SnParams& theta, double alpha, int i, int j,
                  const QuadratureSpec& quad = {}, double halfwidth = 15.0);

// J_alpha(theta) = int u u^T f^{alpha+1} dx (all six entries in one pass).
Mat3 information_matrix(const SnParams& theta, double alpha,
                        const QuadratureSpec& quad = {},
                        double halfwidth = 15.0);

// Assembles J from the alpha integrals, K from the 2*alpha integrals minus
// the xi outer product, and Sigma = J^{-1} K J^{-1}. Throws
// ConditioningError when cond(J) exceeds the guard (notably at gamma = 0,
// where the mu- and gamma-scores are exactly proportional).
AsymptoticCovariance covariance(const SnParams& theta, double alpha,
                                const QuadratureSpec& quad = {},
                                double halfwidth = 15.0);

// Same assembly but never throws on conditioning: the inverse is computed
// past the guard (test statistics still need a number) and flagged.
CovarianceDiagnostics covariance_with_diagnostics(const SnParams& theta,
                                                  double alpha,
                                                  const QuadratureSpec& quad = {},
                                                  double halfwidth = 15.0);

// Componentwise sqrt(diag(Sigma)/n).
Vec3 standard_errors(const AsymptoticCovariance& cov, int n);

// Asymptotic relative efficiency table: 100 * Sigma_0^{(kk)} / Sigma_a^{(kk)}
// per parameter and per (theta, alpha) cell.
struct AreTable {
  std::vector<SnParams> thetas;
  std::vector<double> alphas;
  // values[t][k][a]: distribution t, parameter k (0=mu,1=sigma,2=gamma), alpha a
  std::vector<std::array<std::vector<double>, 3>> values;
  // true where the gamma=0 singularity forced a limit evaluation
  std::vector<bool> limit_evaluated;
};

// Sigma diverges at gamma = 0 (the information matrix is singular there);
// rows with |gamma| < 1e-6 are evaluated at gamma = 1e-3, where the
// ratio has converged to its gamma -> 0 limit, and flagged.
AreTable are_table(const std::vector<SnParams>& theta_list,
                   const std::vector<double>& alpha_list,
                   const QuadratureSpec& quad = {});

}  // namespace snrobust

#endif  // SNROBUST_ASYMPTOTICS_HPP
