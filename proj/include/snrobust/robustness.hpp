#ifndef SNROBUST_ROBUSTNESS_HPP
#define SNROBUST_ROBUSTNESS_HPP

#include <string>
#include <vector>

#include "snrobust/hypothesis.hpp"
#include "snrobust/linalg3.hpp"
#include "snrobust/skew_normal.hpp"

namespace snrobust {

enum class IfKind { estimator_if, test_if2, test_pif };

// Influence function values over a contamination grid, ready for CSV
// emission (the data behind the IF figures).
struct IfCurve {
  double alpha;
  SnParams at_theta;
  std::vector<double> grid;
  // one row per grid point; width 3 for estimator_if, width 1 for test IFs
  std::vector<std::vector<double>> values;
  IfKind kind;
};

// IF(y) = J_alpha^{-1} [ u(y) f(y)^alpha - xi_alpha ], bounded in y for
// alpha > 0 and unbounded at alpha = 0.
Vec3 estimator_if(double y, const SnParams& theta, double alpha,
                  const QuadratureSpec& quad = {});

// Second-order IF of the Wald-type statistic: 2 IF^T Q_alpha IF.
double test_if2(double y, const SnParams& theta0, double alpha,
                const HypothesisSpec& hyp, const QuadratureSpec& quad = {});

// Power influence function C*_r(d^T Q d) d^T Q IF(y) at level tau0.
double test_pif(double y, const SnParams& theta0, double alpha,
                const HypothesisSpec& hyp, const Vec3& d, double tau0,
                const QuadratureSpec& quad = {});

// The C*_r(s) series of the PIF. The v = 0 term simplifies algebraically
// to -P(chi2_r > c); truncation when the next term falls below
// 1e-14 |partial sum|, hard cap 500 terms.
double cstar_series(double s, int r, double tau0);

struct PifSpec {
  HypothesisSpec hyp;
  Vec3 d;
  double tau0;
};

// Grid evaluation; J/xi (and Q for the test kinds) are assembled once.
IfCurve if_curve(IfKind kind, const SnParams& theta, double alpha,
                 const std::vector<double>& grid,
                 const HypothesisSpec* hyp = nullptr, const Vec3* d = nullptr,
                 double tau0 = 0.05, const QuadratureSpec& quad = {});

}  // namespace snrobust

#endif  // SNROBUST_ROBUSTNESS_HPP
