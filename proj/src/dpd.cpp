#include "snrobust/dpd.hpp"

#include <cmath>

#include "snrobust/errors.hpp"
#include "snrobust/quadrature_impl.hpp"
#include "snrobust/special_functions.hpp"

namespace snrobust {

namespace {

constexpr double kHalfLog2Pi = 0.9189385332046727417803297;

// log of the standardized kernel phi(z) Phi(gamma z).
inline double log_kernel(double z, double gamma) {
  return -0.5 * z * z - kHalfLog2Pi + std_normal_log_cdf(gamma * z);
}

// Standardized score pieces (sigma factors stripped):
// uhat = (z - g r, z^2 - 1 - g z r, z r) with r = mills_ratio(g z).
inline Vec3 uhat(double z, double gamma) {
  const double r = mills_ratio(gamma * z);
  return {z - gamma * r, z * z - 1.0 - gamma * z * r, z * r};
}

}  // namespace

void DpdConfig::validate() const {
  if (!(alpha >= 0.0)) throw ConfigError("DpdConfig: alpha must be >= 0");
  if (!(trunc_halfwidth >= 8.0))
    throw ConfigError("DpdConfig: trunc_halfwidth must be >= 8");
  quad.validate();
}

ModelIntegrals model_integrals(const SnParams& theta, double alpha,
                               const QuadratureSpec& quad, double halfwidth) {
  theta.validate();
  if (!(alpha >= 0.0)) throw ParameterError("model_integrals: alpha must be >= 0");
  const double g = theta.gamma, s = theta.sigma;
  const double beta = 1.0 + alpha;
  auto integrand = [g, beta](double z, std::array<double, 4>& out) {
    const double w = std::exp(beta * log_kernel(z, g));
    const Vec3 u = uhat(z, g);
    out = {w, u[0] * w, u[1] * w, u[2] * w};
  };
  const auto I = integrate_vec<4>(integrand, -halfwidth, halfwidth, quad);
  const double pref = std::pow(2.0, beta) * std::pow(s, -alpha);
  ModelIntegrals mi;
  mi.power = pref * I[0];
  mi.xi = {pref * I[1] / s, pref * I[2] / s, pref * I[3]};
  return mi;
}

double power_integral(const SnParams& theta, double beta,
                      const QuadratureSpec& quad, double halfwidth) {
  theta.validate();
  if (!(beta > 0.0)) throw ParameterError("power_integral: beta must be > 0");
  const double g = theta.gamma;
  auto integrand = [g, beta](double z) { return std::exp(beta * log_kernel(z, g)); };
  const double I = integrate(integrand, -halfwidth, halfwidth, quad);
  return std::pow(theta.sigma, 1.0 - beta) * std::pow(2.0, beta) * I;
}

Vec3 xi(const SnParams& theta, double alpha, const QuadratureSpec& quad,
        double halfwidth) {
  return model_integrals(theta, alpha, quad, halfwidth).xi;
}

double objective_from_integrals(const ModelIntegrals& mi, const SnParams& theta,
                                const Sample& data, double alpha) {
  double s = 0.0;
  for (double x : data.values) s += std::exp(alpha * log_pdf(theta, x));
  s /= static_cast<double>(data.values.size());
  return mi.power - (1.0 + 1.0 / alpha) * s;
}

Vec3 gradient_from_integrals(const ModelIntegrals& mi, const SnParams& theta,
                             const Sample& data, double alpha) {
  Vec3 acc{};
  for (double x : data.values) {
    const double fa = std::exp(alpha * log_pdf(theta, x));
    const auto u = score(theta, x);
    for (int k = 0; k < 3; ++k) acc[k] += u[k] * fa;
  }
  const double n = static_cast<double>(data.values.size());
  Vec3 grad;
  for (int k = 0; k < 3; ++k) grad[k] = (1.0 + alpha) * (mi.xi[k] - acc[k] / n);
  return grad;
}

double objective(const SnParams& theta, const Sample& data, const DpdConfig& cfg) {
  cfg.validate();
  data.validate();
  if (!(cfg.alpha > 0.0))
    throw ConfigError("objective: alpha must be > 0 (use the MLE path at alpha = 0)");
  const auto mi = model_integrals(theta, cfg.alpha, cfg.quad, cfg.trunc_halfwidth);
  return objective_from_integrals(mi, theta, data, cfg.alpha);
}

Vec3 objective_gradient(const SnParams& theta, const Sample& data,
                        const DpdConfig& cfg) {
  cfg.validate();
  data.validate();
  if (!(cfg.alpha > 0.0))
    throw ConfigError("objective_gradient: alpha must be > 0");
  const auto mi = model_integrals(theta, cfg.alpha, cfg.quad, cfg.trunc_halfwidth);
  return gradient_from_integrals(mi, theta, data, cfg.alpha);
}

Vec3 psi(double x, const SnParams& theta, const DpdConfig& cfg) {
  cfg.validate();
  const auto mi = model_integrals(theta, cfg.alpha, cfg.quad, cfg.trunc_halfwidth);
  const double fa = std::exp(cfg.alpha * log_pdf(theta, x));
  const auto u = score(theta, x);
  return {u[0] * fa - mi.xi[0], u[1] * fa - mi.xi[1], u[2] * fa - mi.xi[2]};
}

double dpd_divergence(const std::function<double(double)>& g_pdf,
                      const std::function<double(double)>& f_pdf, double alpha,
                      const QuadratureSpec& quad, double lo, double hi) {
  if (!(alpha >= 0.0)) throw ParameterError("dpd_divergence: alpha must be >= 0");
  if (alpha == 0.0) {
    auto kld = [&](double x) {
      const double g = g_pdf(x);
      if (g <= 1e-300) return 0.0;
      const double f = f_pdf(x);
      return g * (std::log(g) - std::log(f));
    };
    return integrate(kld, lo, hi, quad);
  }
  auto integrand = [&](double x) {
    const double g = g_pdf(x), f = f_pdf(x);
    const double fa = std::pow(f, alpha);
    return fa * f - (1.0 + 1.0 / alpha) * g * fa +
           std::pow(g, alpha) * g / alpha;
  };
  return integrate(integrand, lo, hi, quad);
}

}  // namespace snrobust
