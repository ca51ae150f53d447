#include "snrobust/quadrature.hpp"

#include <cmath>

#include "snrobust/errors.hpp"
#include "snrobust/quadrature_impl.hpp"

namespace snrobust {

void QuadratureSpec::validate() const {
  if (!(abs_tol > 0.0) || !(rel_tol > 0.0))
    throw ConfigError("QuadratureSpec: tolerances must be positive");
  if (max_subdivisions < 1)
    throw ConfigError("QuadratureSpec: max_subdivisions must be >= 1");
}

double integrate(const std::function<double(double)>& f, double a, double b,
                 const QuadratureSpec& spec) {
  auto wrapped = [&f](double x, std::array<double, 1>& out) { out[0] = f(x); };
  return integrate_vec<1>(wrapped, a, b, spec)[0];
}

}  // namespace snrobust
