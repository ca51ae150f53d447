#include "snrobust/hypothesis.hpp"

#include <cmath>
#include <limits>

#include "snrobust/errors.hpp"

namespace snrobust {

namespace {

// --- small r x r solver (r <= 3) ---------------------------------------

// Inverse of the leading r x r block of a; entries beyond r are ignored.
void invert_small(const double a[3][3], int r, double inv[3][3]) {
  if (r == 1) {
    if (a[0][0] == 0.0)
      throw ConditioningError("invert_small: singular 1x1 system",
                              std::numeric_limits<double>::infinity());
    inv[0][0] = 1.0 / a[0][0];
    return;
  }
  if (r == 2) {
    const double det = a[0][0] * a[1][1] - a[0][1] * a[1][0];
    if (det == 0.0)
      throw ConditioningError("invert_small: singular 2x2 system",
                              std::numeric_limits<double>::infinity());
    inv[0][0] = a[1][1] / det;
    inv[1][1] = a[0][0] / det;
    inv[0][1] = -a[0][1] / det;
    inv[1][0] = -a[1][0] / det;
    return;
  }
  Mat3 m;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) m[i][j] = a[i][j];
  const Mat3 mi = inverse3(m, nullptr, std::numeric_limits<double>::infinity());
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) inv[i][j] = mi[i][j];
}

// M^T A M for a 3x3 A and 3 x r M given as r columns.
void sandwich_columns(const Mat3& a, const std::vector<Vec3>& cols, int r,
                      double out[3][3]) {
  for (int i = 0; i < r; ++i) {
    const Vec3 am = matvec(a, cols[i]);
    for (int j = 0; j < r; ++j) out[j][i] = dot(cols[j], am);
  }
}

struct QuadForm {
  double value;
  bool warning;
};

// m^T (M^T Sigma M)^{-1} m with a conditioning warning instead of a throw:
// the statistic must still be returned at near-singular information.
QuadForm restricted_quadform(const Mat3& sigma, const std::vector<Vec3>& cols,
                             int r, const std::vector<double>& m) {
  double a[3][3] = {};
  sandwich_columns(sigma, cols, r, a);
  bool warn = false;
  for (int i = 0; i < r; ++i)
    if (!(std::isfinite(a[i][i])) || a[i][i] <= 0.0) warn = true;
  double inv[3][3] = {};
  try {
    invert_small(a, r, inv);
  } catch (const ConditioningError&) {
    return {0.0, true};
  }
  double q = 0.0;
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < r; ++j) q += m[i] * inv[i][j] * m[j];
  if (!std::isfinite(q)) return {0.0, true};
  if (q < 0.0) {
    q = 0.0;
    warn = true;
  }
  return {q, warn};
}

std::map<double, bool> decisions(double p) {
  std::map<double, bool> d;
  for (double tau : {0.01, 0.05, 0.10}) d[tau] = p < tau;
  return d;
}

}  // namespace

void HypothesisSpec::validate() const {
  if (r < 1 || r > 3) throw ConfigError("HypothesisSpec: r must be in {1,2,3}");
  if (!restriction || !jacobian)
    throw ConfigError("HypothesisSpec: restriction and jacobian required");
}

HypothesisSpec HypothesisSpec::gamma_equals(double gamma0) {
  HypothesisSpec h;
  h.r = 1;
  h.description = "gamma=" + std::to_string(gamma0);
  h.restriction = [gamma0](const SnParams& t) {
    return std::vector<double>{t.gamma - gamma0};
  };
  h.jacobian = [](const SnParams&) { return std::vector<Vec3>{{0.0, 0.0, 1.0}}; };
  return h;
}

HypothesisSpec HypothesisSpec::sigma_equals(double sigma0) {
  HypothesisSpec h;
  h.r = 1;
  h.description = "sigma=" + std::to_string(sigma0);
  h.restriction = [sigma0](const SnParams& t) {
    return std::vector<double>{t.sigma - sigma0};
  };
  h.jacobian = [](const SnParams&) { return std::vector<Vec3>{{0.0, 1.0, 0.0}}; };
  return h;
}

HypothesisSpec HypothesisSpec::mu_equals(double mu0) {
  HypothesisSpec h;
  h.r = 1;
  h.description = "mu=" + std::to_string(mu0);
  h.restriction = [mu0](const SnParams& t) {
    return std::vector<double>{t.mu - mu0};
  };
  h.jacobian = [](const SnParams&) { return std::vector<Vec3>{{1.0, 0.0, 0.0}}; };
  return h;
}

HypothesisSpec HypothesisSpec::point(const SnParams& theta0) {
  HypothesisSpec h;
  h.r = 3;
  h.description = "theta=(" + std::to_string(theta0.mu) + "," +
                  std::to_string(theta0.sigma) + "," +
                  std::to_string(theta0.gamma) + ")";
  h.restriction = [theta0](const SnParams& t) {
    return std::vector<double>{t.mu - theta0.mu, t.sigma - theta0.sigma,
                               t.gamma - theta0.gamma};
  };
  h.jacobian = [](const SnParams&) {
    return std::vector<Vec3>{{1, 0, 0}, {0, 1, 0}, {0, 0, 1}};
  };
  return h;
}

// --- incomplete gamma ----------------------------------------------------

namespace {

// series for P(a,x), x < a+1
double gamma_p_series(double a, double x) {
  double ap = a;
  double sum = 1.0 / a;
  double del = sum;
  for (int i = 0; i < 1000; ++i) {
    ap += 1.0;
    del *= x / ap;
    sum += del;
    if (std::abs(del) < std::abs(sum) * 1e-16)
      return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
  }
  throw NumericalError("gamma_p: series did not converge");
}

// Lentz continued fraction for Q(a,x), x >= a+1
double gamma_q_cf(double a, double x) {
  const double tiny = 1e-300;
  double b = x + 1.0 - a;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i <= 1000; ++i) {
    const double an = -static_cast<double>(i) * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double delta = d * c;
    h *= delta;
    if (std::abs(delta - 1.0) < 1e-16)
      return h * std::exp(-x + a * std::log(x) - std::lgamma(a));
  }
  throw NumericalError("gamma_q: continued fraction did not converge");
}

}  // namespace

double gamma_p(double a, double x) {
  if (!(a > 0.0) || x < 0.0) throw ParameterError("gamma_p: need a > 0, x >= 0");
  if (x == 0.0) return 0.0;
  return x < a + 1.0 ? gamma_p_series(a, x) : 1.0 - gamma_q_cf(a, x);
}

double gamma_q(double a, double x) {
  if (!(a > 0.0) || x < 0.0) throw ParameterError("gamma_q: need a > 0, x >= 0");
  if (x == 0.0) return 1.0;
  return x < a + 1.0 ? 1.0 - gamma_p_series(a, x) : gamma_q_cf(a, x);
}

double chisq_sf(double x, int df) {
  if (df < 1) throw ParameterError("chisq_sf: df must be >= 1");
  if (x < 0.0) return 1.0;
  return gamma_q(0.5 * df, 0.5 * x);
}

double chisq_quantile(double p, int df) {
  if (!(p > 0.0 && p < 1.0)) throw ParameterError("chisq_quantile: p in (0,1)");
  if (df < 1) throw ParameterError("chisq_quantile: df must be >= 1");
  // bracket then bisect/Newton on the CDF
  double lo = 0.0, hi = std::max(10.0, df + 10.0 * std::sqrt(2.0 * df));
  while (gamma_p(0.5 * df, 0.5 * hi) < p) hi *= 2.0;
  double x = 0.5 * (lo + hi);
  for (int i = 0; i < 200; ++i) {
    const double F = gamma_p(0.5 * df, 0.5 * x);
    if (F > p)
      hi = x;
    else
      lo = x;
    // Newton step from the chi-square density, kept inside the bracket
    const double logpdf = (0.5 * df - 1.0) * std::log(x) - 0.5 * x -
                          0.5 * df * M_LN2 - std::lgamma(0.5 * df);
    const double pdf = std::exp(logpdf);
    double next = pdf > 0.0 ? x - (F - p) / pdf : 0.5 * (lo + hi);
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (std::abs(next - x) < 1e-13 * std::max(1.0, x)) return next;
    x = next;
  }
  return x;
}

double noncentral_chisq_sf(double x, int df, double noncentrality) {
  if (df < 1) throw ParameterError("noncentral_chisq_sf: df must be >= 1");
  if (x < 0.0) return 1.0;
  if (!(noncentrality >= 0.0))
    throw ParameterError("noncentral_chisq_sf: noncentrality must be >= 0");
  if (noncentrality == 0.0) return chisq_sf(x, df);

  const double lambda = 0.5 * noncentrality;
  // Q_{df+2j}(x) built by upward recurrence from Q_df(x).
  double q = chisq_sf(x, df);
  // increment term: (x/2)^{df/2} e^{-x/2} / Gamma(df/2 + 1)
  double inc = std::exp(0.5 * df * std::log(0.5 * x) - 0.5 * x -
                        std::lgamma(0.5 * df + 1.0));
  double w = std::exp(-lambda);  // Poisson weight at j = 0
  double cumw = w;
  double sf = w * q;
  for (int j = 1; j <= 10000; ++j) {
    q += inc;
    inc *= 0.5 * x / (0.5 * df + j);
    w *= lambda / j;
    cumw += w;
    sf += w * q;
    // remaining Poisson mass bounds the truncation error (Q <= 1)
    if (1.0 - cumw < 1e-12 && j > lambda) return std::min(sf, 1.0);
  }
  throw NumericalError("noncentral_chisq_sf: series cap exceeded");
}

// --- tests ---------------------------------------------------------------

WaldTestResult wald_test_from_fit(const FitResult& fit, std::size_t n,
                                  const HypothesisSpec& hyp) {
  hyp.validate();
  const SnParams& th = fit.params;
  const auto m = hyp.restriction(th);
  const auto cols = hyp.jacobian(th);
  if (static_cast<int>(m.size()) != hyp.r || static_cast<int>(cols.size()) != hyp.r)
    throw ConfigError("wald_test: restriction/jacobian size mismatch with r");

  // numerical consistency of the Jacobian with the restriction
  const double h = 1e-6;
  for (int k = 0; k < 3; ++k) {
    SnParams tp = th, tm = th;
    (k == 0 ? tp.mu : k == 1 ? tp.sigma : tp.gamma) += h;
    (k == 0 ? tm.mu : k == 1 ? tm.sigma : tm.gamma) -= h;
    const auto mp = hyp.restriction(tp);
    const auto mm = hyp.restriction(tm);
    for (int i = 0; i < hyp.r; ++i) {
      const double fd = (mp[i] - mm[i]) / (2.0 * h);
      if (std::abs(fd - cols[i][k]) > 1e-5)
        throw ConfigError("wald_test: jacobian inconsistent with restriction");
    }
  }

  const auto qf = restricted_quadform(fit.covariance.sigma_matrix, cols, hyp.r, m);
  WaldTestResult res;
  res.statistic = static_cast<double>(n) * qf.value;
  res.df = hyp.r;
  res.p_value = chisq_sf(res.statistic, res.df);
  res.alpha = fit.alpha;
  res.fit = fit;
  res.reject_at = decisions(res.p_value);
  res.hypothesis = hyp.description;
  res.conditioning_warning = qf.warning || !fit.covariance_well_conditioned;
  return res;
}

WaldTestResult wald_test(const Sample& data, double alpha,
                         const HypothesisSpec& hyp, const GdConfig& fit_cfg) {
  const FitResult f = fit(data, alpha, fit_cfg);
  return wald_test_from_fit(f, data.size(), hyp);
}

WaldTestResult symmetry_test(const Sample& data, double alpha, double gamma0,
                             const GdConfig& fit_cfg) {
  const FitResult f = fit(data, alpha, fit_cfg);
  WaldTestResult res = wald_test_from_fit(f, data.size(), HypothesisSpec::gamma_equals(gamma0));
  // simplified display form W = n (gamma_hat - gamma0)^2 / Sigma^{(33)}
  const double s33 = f.covariance.sigma_matrix[2][2];
  if (std::isfinite(s33) && s33 > 0.0) {
    const double dgamma = f.params.gamma - gamma0;
    res.statistic = static_cast<double>(data.size()) * dgamma * dgamma / s33;
    res.p_value = chisq_sf(res.statistic, 1);
    res.reject_at = decisions(res.p_value);
  }
  return res;
}

Mat3 q_matrix(const SnParams& theta0, double alpha, const HypothesisSpec& hyp,
              const QuadratureSpec& quad) {
  hyp.validate();
  const AsymptoticCovariance cov = covariance(theta0, alpha, quad);
  const auto cols = hyp.jacobian(theta0);
  double a[3][3] = {}, inv[3][3] = {};
  sandwich_columns(cov.sigma_matrix, cols, hyp.r, a);
  invert_small(a, hyp.r, inv);
  Mat3 q{};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      for (int s = 0; s < hyp.r; ++s)
        for (int t = 0; t < hyp.r; ++t)
          q[i][j] += cols[s][i] * inv[s][t] * cols[t][j];
  return q;
}

double contiguous_power(const SnParams& theta0, double alpha,
                        const HypothesisSpec& hyp, const Vec3& d, double tau0,
                        const QuadratureSpec& quad) {
  hyp.validate();
  if (!(tau0 > 0.0 && tau0 < 1.0))
    throw ParameterError("contiguous_power: tau0 must be in (0,1)");
  const auto m0 = hyp.restriction(theta0);
  for (double v : m0)
    if (std::abs(v) > 1e-8)
      throw ParameterError("contiguous_power: theta0 must satisfy the null");

  const auto cols = hyp.jacobian(theta0);
  double delta;
  const auto diag = covariance_with_diagnostics(theta0, alpha, quad);
  if (diag.well_conditioned) {
    double a[3][3] = {}, inv[3][3] = {};
    sandwich_columns(diag.cov.sigma_matrix, cols, hyp.r, a);
    invert_small(a, hyp.r, inv);
    double md[3];
    for (int i = 0; i < hyp.r; ++i) md[i] = dot(cols[i], d);
    delta = 0.0;
    for (int i = 0; i < hyp.r; ++i)
      for (int j = 0; j < hyp.r; ++j) delta += md[i] * inv[i][j] * md[j];
  } else {
    // Singular information (gamma = 0): use the restricted-direction
    // sandwich M^T J M, M^T K M instead of the full Sigma.
    double jm[3][3] = {}, km[3][3] = {}, jinv[3][3] = {};
    sandwich_columns(diag.cov.j_matrix, cols, hyp.r, jm);
    sandwich_columns(diag.cov.k_matrix, cols, hyp.r, km);
    invert_small(jm, hyp.r, jinv);
    // Sigma_m = Jm^{-1} Km Jm^{-1}; delta = dm^T Sigma_m^{-1} dm
    double sm[3][3] = {}, sminv[3][3] = {};
    for (int i = 0; i < hyp.r; ++i)
      for (int j = 0; j < hyp.r; ++j) {
        double acc = 0.0;
        for (int s = 0; s < hyp.r; ++s)
          for (int t = 0; t < hyp.r; ++t)
            acc += jinv[i][s] * km[s][t] * jinv[t][j];
        sm[i][j] = acc;
      }
    invert_small(sm, hyp.r, sminv);
    double md[3];
    for (int i = 0; i < hyp.r; ++i) md[i] = dot(cols[i], d);
    delta = 0.0;
    for (int i = 0; i < hyp.r; ++i)
      for (int j = 0; j < hyp.r; ++j) delta += md[i] * sminv[i][j] * md[j];
  }
  if (delta < 0.0) delta = 0.0;
  const double crit = chisq_quantile(1.0 - tau0, hyp.r);
  return noncentral_chisq_sf(crit, hyp.r, delta);
}

}  // namespace snrobust
