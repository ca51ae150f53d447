#include "snrobust/robustness.hpp"

#include <cmath>

#include "snrobust/asymptotics.hpp"
#include "snrobust/dpd.hpp"
#include "snrobust/errors.hpp"

namespace snrobust {

namespace {

struct IfEvaluator {
  Mat3 jinv;
  Vec3 xi_vec;
  SnParams theta;
  double alpha;

  Vec3 operator()(double y) const {
    const double fa = std::exp(alpha * log_pdf(theta, y));
    const auto u = score(theta, y);
    const Vec3 v = {u[0] * fa - xi_vec[0], u[1] * fa - xi_vec[1],
                    u[2] * fa - xi_vec[2]};
    return matvec(jinv, v);
  }
};

IfEvaluator make_if_evaluator(const SnParams& theta, double alpha,
                              const QuadratureSpec& quad) {
  theta.validate();
  if (!(alpha >= 0.0)) throw ParameterError("estimator_if: alpha must be >= 0");
  const Mat3 j = information_matrix(theta, alpha, quad);
  IfEvaluator e;
  e.jinv = inverse3(j, nullptr, kConditionGuard);
  e.xi_vec = alpha == 0.0 ? Vec3{} : xi(theta, alpha, quad);
  e.theta = theta;
  e.alpha = alpha;
  return e;
}

void check_null(const SnParams& theta0, const HypothesisSpec& hyp) {
  for (double v : hyp.restriction(theta0))
    if (std::abs(v) > 1e-8)
      throw ParameterError("test IF: theta0 must satisfy the null restriction");
}

}  // namespace

Vec3 estimator_if(double y, const SnParams& theta, double alpha,
                  const QuadratureSpec& quad) {
  return make_if_evaluator(theta, alpha, quad)(y);
}

double cstar_series(double s, int r, double tau0) {
  if (!(s >= 0.0)) throw ParameterError("cstar_series: s must be >= 0");
  if (!(tau0 > 0.0 && tau0 < 1.0))
    throw ParameterError("cstar_series: tau0 must be in (0,1)");
  const double c = chisq_quantile(1.0 - tau0, r);

  // tail = P(chi2_{r+2v} > c), advanced by the upward recurrence
  double tail = chisq_sf(c, r);
  double inc = std::exp(0.5 * r * std::log(0.5 * c) - 0.5 * c -
                        std::lgamma(0.5 * r + 1.0));
  // v = 0 term simplifies to -tail (the s^{-1} factor cancels against 2v-s)
  double sum = -tail;
  double a = 0.5;  // s^{v-1} 2^{-v} / v! at v = 1
  for (int v = 1; v <= 500; ++v) {
    tail += inc;
    inc *= 0.5 * c / (0.5 * r + v);
    const double term = a * (2.0 * v - s) * tail;
    sum += term;
    a *= s / (2.0 * (v + 1));
    if (2.0 * v > s && std::abs(term) < 1e-14 * std::abs(sum))
      return std::exp(-0.5 * s) * sum;
  }
  throw NumericalError("cstar_series: term cap exceeded");
}

double test_if2(double y, const SnParams& theta0, double alpha,
                const HypothesisSpec& hyp, const QuadratureSpec& quad) {
  hyp.validate();
  check_null(theta0, hyp);
  const Mat3 q = q_matrix(theta0, alpha, hyp, quad);
  const Vec3 f = estimator_if(y, theta0, alpha, quad);
  return 2.0 * dot(f, matvec(q, f));
}

double test_pif(double y, const SnParams& theta0, double alpha,
                const HypothesisSpec& hyp, const Vec3& d, double tau0,
                const QuadratureSpec& quad) {
  hyp.validate();
  check_null(theta0, hyp);
  if (d[0] == 0.0 && d[1] == 0.0 && d[2] == 0.0)
    throw ParameterError("test_pif: d must be nonzero");
  const Mat3 q = q_matrix(theta0, alpha, hyp, quad);
  const Vec3 qd = matvec(q, d);
  const double s = dot(d, qd);
  const Vec3 f = estimator_if(y, theta0, alpha, quad);
  return cstar_series(s, hyp.r, tau0) * dot(qd, f);
}

IfCurve if_curve(IfKind kind, const SnParams& theta, double alpha,
                 const std::vector<double>& grid, const HypothesisSpec* hyp,
                 const Vec3* d, double tau0, const QuadratureSpec& quad) {
  if (grid.empty()) throw ConfigError("if_curve: empty grid");
  for (std::size_t i = 1; i < grid.size(); ++i)
    if (!(grid[i] > grid[i - 1]))
      throw ConfigError("if_curve: grid must be strictly increasing");
  if (kind != IfKind::estimator_if && hyp == nullptr)
    throw ConfigError("if_curve: test IF kinds need a hypothesis");
  if (kind == IfKind::test_pif && d == nullptr)
    throw ConfigError("if_curve: PIF needs a shift direction d");

  IfCurve curve;
  curve.alpha = alpha;
  curve.at_theta = theta;
  curve.grid = grid;
  curve.kind = kind;

  const IfEvaluator eval = make_if_evaluator(theta, alpha, quad);
  Mat3 q{};
  double cstar = 0.0;
  Vec3 qd{};
  if (kind != IfKind::estimator_if) {
    hyp->validate();
    check_null(theta, *hyp);
    q = q_matrix(theta, alpha, *hyp, quad);
    if (kind == IfKind::test_pif) {
      qd = matvec(q, *d);
      cstar = cstar_series(dot(*d, qd), hyp->r, tau0);
    }
  }

  curve.values.reserve(grid.size());
  for (double y : grid) {
    const Vec3 f = eval(y);
    switch (kind) {
      case IfKind::estimator_if:
        curve.values.push_back({f[0], f[1], f[2]});
        break;
      case IfKind::test_if2:
        curve.values.push_back({2.0 * dot(f, matvec(q, f))});
        break;
      case IfKind::test_pif:
        curve.values.push_back({cstar * dot(qd, f)});
        break;
    }
  }
  return curve;
}

}  // namespace snrobust
