#ifndef SNROBUST_HYPOTHESIS_HPP
#define SNROBUST_HYPOTHESIS_HPP

#include <functional>
#include <map>
#include <string>
#include <vector>

#include "snrobust/estimation.hpp"
#include "snrobust/linalg3.hpp"
#include "snrobust/skew_normal.hpp"

namespace snrobust {

// Composite restriction m(theta) = 0_r with Jacobian M(theta) (3 x r).
struct HypothesisSpec {
  std::function<std::vector<double>(const SnParams&)> restriction;
  std::function<std::vector<Vec3>(const SnParams&)> jacobian;  // r columns
  int r = 1;
  std::string description;

  void validate() const;

  // Common cases: single-parameter point restrictions with the other
  // parameters free.
  static HypothesisSpec gamma_equals(double gamma0);
  static HypothesisSpec sigma_equals(double sigma0);
  static HypothesisSpec mu_equals(double mu0);
  // Simple null Theta_0 = {theta0}: m(theta) = theta - theta0, M = I_3.
  static HypothesisSpec point(const SnParams& theta0);
};

struct WaldTestResult {
  double statistic = 0.0;
  int df = 1;
  double p_value = 1.0;
  double alpha = 0.0;
  FitResult fit;
  std::map<double, bool> reject_at;  // significance level -> decision
  std::string hypothesis;
  bool conditioning_warning = false;
};

// --- chi-square machinery ---------------------------------------------

// Regularized incomplete gamma functions P(a,x), Q(a,x).
double gamma_p(double a, double x);
double gamma_q(double a, double x);

// Central chi-square survival function and upper quantile.
double chisq_sf(double x, int df);
double chisq_quantile(double p, int df);  // P(X <= q) = p

// Noncentral chi-square survival function by the Poisson mixture of
// central chi-squares; absolute error < 1e-10, series capped at 10000.
double noncentral_chisq_sf(double x, int df, double noncentrality);

// --- Wald-type tests ---------------------------------------------------

// W = n m(th)^T [M^T Sigma_a M]^{-1} m(th), everything at the unrestricted
// fit; asymptotically chi-square_r under the null. alpha = 0 runs the
// classical Wald test on the MLE.
WaldTestResult wald_test(const Sample& data, double alpha,
                         const HypothesisSpec& hyp, const GdConfig& fit_cfg = {});

// As wald_test with m(theta) = gamma - gamma0; gamma0 = 0 tests symmetry.
// Near-symmetric data can make Sigma^{(33)} huge; the statistic is still
// returned, with conditioning_warning set.
WaldTestResult symmetry_test(const Sample& data, double alpha, double gamma0,
                             const GdConfig& fit_cfg = {});

// Reuse an existing fit (level/power replication loops fit once per alpha).
WaldTestResult wald_test_from_fit(const FitResult& fit, std::size_t n,
                                  const HypothesisSpec& hyp);

// Asymptotic power under the contiguous alternative theta_0 + d/sqrt(n):
// 1 - G_{chi2_{r,delta}}(chi2_{r,tau0}) with delta = d^T Q_alpha(theta0) d.
// If Sigma(theta0) is unavailable (singular information at gamma = 0), the
// noncentrality falls back to the restricted-direction sandwich
// d_m^T [ (M^T J M)^{-1} M^T K M (M^T J M)^{-1} ]^{-1} d_m, d_m = M^T d.
double contiguous_power(const SnParams& theta0, double alpha,
                        const HypothesisSpec& hyp, const Vec3& d, double tau0,
                        const QuadratureSpec& quad = {});

// Q_alpha(theta0) = M [M^T Sigma M]^{-1} M^T (rank r).
Mat3 q_matrix(const SnParams& theta0, double alpha, const HypothesisSpec& hyp,
              const QuadratureSpec& quad = {});

}  // namespace snrobust

#endif  // SNROBUST_HYPOTHESIS_HPP
