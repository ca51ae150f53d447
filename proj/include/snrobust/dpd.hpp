#ifndef SNROBUST_DPD_HPP
#define SNROBUST_DPD_HPP

#include <array>
#include <functional>

#include "snrobust/linalg3.hpp"
#include "snrobust/quadrature.hpp"
#include "snrobust/sample.hpp"
#include "snrobust/skew_normal.hpp"

namespace snrobust {

struct DpdConfig {
  double alpha = 0.5;
  QuadratureSpec quad{};
  double trunc_halfwidth = 15.0;  // standardized integration window

  void validate() const;  // alpha >= 0, halfwidth >= 8
};

// Model integrals shared by the objective, its gradient and the influence
// function: power = int f^{1+alpha}, xi = int u f^{1+alpha}.
struct ModelIntegrals {
  double power;
  Vec3 xi;
};

ModelIntegrals model_integrals(const SnParams& theta, double alpha,
                               const QuadratureSpec& quad = {},
                               double halfwidth = 15.0);

// int f_theta(x)^beta dx, computed in the standardized variable as
// sigma^{1-beta} 2^beta int phi(z)^beta Phi(gamma z)^beta dz.
double power_integral(const SnParams& theta, double beta,
                      const QuadratureSpec& quad = {}, double halfwidth = 15.0);

// xi_alpha(theta) = int u_theta(x) f_theta(x)^{alpha+1} dx.
Vec3 xi(const SnParams& theta, double alpha, const QuadratureSpec& quad = {},
        double halfwidth = 15.0);

// Empirical objective
//   H_n(theta) = int f^{1+alpha} - (1 + 1/alpha) (1/n) sum_i f(X_i)^alpha.
// alpha = 0 is rejected (the likelihood limit is handled by the MLE path).
double objective(const SnParams& theta, const Sample& data, const DpdConfig& cfg);

// Analytic gradient (1+alpha)[xi_alpha - (1/n) sum_i u(X_i) f(X_i)^alpha].
Vec3 objective_gradient(const SnParams& theta, const Sample& data,
                        const DpdConfig& cfg);

// As above but reusing precomputed model integrals at (theta, alpha).
double objective_from_integrals(const ModelIntegrals& mi, const SnParams& theta,
                                const Sample& data, double alpha);
Vec3 gradient_from_integrals(const ModelIntegrals& mi, const SnParams& theta,
                             const Sample& data, double alpha);

// M-estimation psi-function: psi(x, theta) = u(x) f(x)^alpha - xi_alpha.
// The sample sum of psi vanishes at the fit.
Vec3 psi(double x, const SnParams& theta, const DpdConfig& cfg);

// DPD between two generic densities on [lo, hi]; alpha = 0 gives the
// Kullback-Leibler divergence.
double dpd_divergence(const std::function<double(double)>& g_pdf,
                      const std::function<double(double)>& f_pdf, double alpha,
                      const QuadratureSpec& quad = {}, double lo = -60.0,
                      double hi = 60.0);

}  // namespace snrobust

#endif  // SNROBUST_DPD_HPP
