#include "snrobust/asymptotics.hpp"

#include <cmath>
#include <limits>

#include "snrobust/errors.hpp"
#include "snrobust/quadrature_impl.hpp"
#include "snrobust/special_functions.hpp"

namespace snrobust {

namespace {

constexpr double kHalfLog2Pi = 0.9189385332046727417803297;

inline double log_kernel(double z, double gamma) {
  return -0.5 * z * z - kHalfLog2Pi + std_normal_log_cdf(gamma * z);
}

inline Vec3 uhat(double z, double gamma) {
  const double r = mills_ratio(gamma * z);
  return {z - gamma * r, z * z - 1.0 - gamma * z * r, z * r};
}

// sigma exponents of the standardized score components
constexpr double kSigPow[3] = {1.0, 1.0, 0.0};

struct MomentSet {
  Mat3 n;    // N^{(ij)} at the requested exponent
  Vec3 xi;   // xi at the requested exponent
};

// One quadrature pass for the six distinct N integrals and the three xi
// components at weight f^{1+a}.
MomentSet score_moments(const SnParams& theta, double a,
                        const QuadratureSpec& quad, double halfwidth) {
  const double g = theta.gamma, s = theta.sigma;
  const double beta = 1.0 + a;
  auto integrand = [g, beta](double z, std::array<double, 9>& out) {
    const double w = std::exp(beta * log_kernel(z, g));
    const Vec3 u = uhat(z, g);
    out = {u[0] * u[0] * w, u[0] * u[1] * w, u[0] * u[2] * w,
           u[1] * u[1] * w, u[1] * u[2] * w, u[2] * u[2] * w,
           u[0] * w,        u[1] * w,        u[2] * w};
  };
  const auto I = integrate_vec<9>(integrand, -halfwidth, halfwidth, quad);
  const double pref = std::pow(2.0, beta) * std::pow(s, -a);
  MomentSet m;
  const double raw[3][3] = {{I[0], I[1], I[2]}, {I[1], I[3], I[4]}, {I[2], I[4], I[5]}};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      m.n[i][j] = pref * raw[i][j] / std::pow(s, kSigPow[i] + kSigPow[j]);
  for (int i = 0; i < 3; ++i) m.xi[i] = pref * I[6 + i] / std::pow(s, kSigPow[i]);
  return m;
}

CovarianceDiagnostics assemble(const SnParams& theta, double alpha,
                               const QuadratureSpec& quad, double halfwidth,
                               bool honor_guard) {
  theta.validate();
  if (!(alpha >= 0.0)) throw ParameterError("covariance: alpha must be >= 0");
  const MomentSet a = score_moments(theta, alpha, quad, halfwidth);
  CovarianceDiagnostics out;
  out.cov.j_matrix = a.n;
  if (alpha == 0.0) {
    // xi_0 = 0 and the 2*alpha integrals collapse: K = J.
    out.cov.k_matrix = a.n;
  } else {
    const MomentSet a2 = score_moments(theta, 2.0 * alpha, quad, halfwidth);
    const Mat3 xx = outer(a.xi, a.xi);
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) out.cov.k_matrix[i][j] = a2.n[i][j] - xx[i][j];
  }
  const double guard = honor_guard ? kConditionGuard
                                   : std::numeric_limits<double>::infinity();
  try {
    const Mat3 jinv = inverse3(out.cov.j_matrix, &out.j_condition, guard);
    out.cov.sigma_matrix = matmul(jinv, matmul(out.cov.k_matrix, jinv));
  } catch (const ConditioningError&) {
    if (honor_guard) throw;
    // exactly singular J: no sandwich exists, flag via NaN entries
    out.j_condition = std::numeric_limits<double>::infinity();
    for (auto& row : out.cov.sigma_matrix)
      row.fill(std::numeric_limits<double>::quiet_NaN());
  }
  out.cov.alpha = alpha;
  out.cov.at_theta = theta;
  out.well_conditioned = out.j_condition <= kConditionGuard;
  return out;
}

}  // namespace

double n_integral(const SnParams& theta, double alpha, int i, int j,
                  const QuadratureSpec& quad, double halfwidth) {
  theta.validate();
  if (!(alpha >= 0.0)) throw ParameterError("n_integral: alpha must be >= 0");
  if (i < 1 || j < 1 || i > 3 || j > 3 || i > j)
    throw ParameterError("n_integral: indices must satisfy 1 <= i <= j <= 3");
  const double g = theta.gamma, s = theta.sigma;
  const double beta = 1.0 + alpha;
  const int ii = i - 1, jj = j - 1;
  auto integrand = [g, beta, ii, jj](double z) {
    const Vec3 u = uhat(z, g);
    return u[ii] * u[jj] * std::exp(beta * log_kernel(z, g));
  };
  const double I = integrate(integrand, -halfwidth, halfwidth, quad);
  return std::pow(2.0, beta) * std::pow(s, -alpha) * I /
         std::pow(s, kSigPow[ii] + kSigPow[jj]);
}

Mat3 information_matrix(const SnParams& theta, double alpha,
                        const QuadratureSpec& quad, double halfwidth) {
  theta.validate();
  if (!(alpha >= 0.0))
    throw ParameterError("information_matrix: alpha must be >= 0");
  return score_moments(theta, alpha, quad, halfwidth).n;
}

AsymptoticCovariance covariance(const SnParams& theta, double alpha,
                                const QuadratureSpec& quad, double halfwidth) {
  return assemble(theta, alpha, quad, halfwidth, true).cov;
}

CovarianceDiagnostics covariance_with_diagnostics(const SnParams& theta,
                                                  double alpha,
                                                  const QuadratureSpec& quad,
                                                  double halfwidth) {
  return assemble(theta, alpha, quad, halfwidth, false);
}

Vec3 standard_errors(const AsymptoticCovariance& cov, int n) {
  if (n < 1) throw ParameterError("standard_errors: n must be >= 1");
  const double dn = static_cast<double>(n);
  return {std::sqrt(cov.sigma_matrix[0][0] / dn),
          std::sqrt(cov.sigma_matrix[1][1] / dn),
          std::sqrt(cov.sigma_matrix[2][2] / dn)};
}

AreTable are_table(const std::vector<SnParams>& theta_list,
                   const std::vector<double>& alpha_list,
                   const QuadratureSpec& quad) {
  if (theta_list.empty() || alpha_list.empty())
    throw ConfigError("are_table: empty grid");
  AreTable t;
  t.thetas = theta_list;
  t.alphas = alpha_list;
  for (const auto& theta : theta_list) {
    SnParams eval = theta;
    const bool at_singularity = std::abs(theta.gamma) < 1e-6;
    if (at_singularity) eval.gamma = 1e-3;
    t.limit_evaluated.push_back(at_singularity);

    const AsymptoticCovariance base = covariance_with_diagnostics(eval, 0.0, quad).cov;
    std::array<std::vector<double>, 3> rows;
    for (double a : alpha_list) {
      if (a == 0.0) {
        for (int k = 0; k < 3; ++k) rows[k].push_back(100.0);
        continue;
      }
      const AsymptoticCovariance ca = covariance_with_diagnostics(eval, a, quad).cov;
      for (int k = 0; k < 3; ++k)
        rows[k].push_back(100.0 * base.sigma_matrix[k][k] / ca.sigma_matrix[k][k]);
    }
    t.values.push_back(rows);
  }
  return t;
}

}  // namespace snrobust
