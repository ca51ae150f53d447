#ifndef SNROBUST_QUADRATURE_HPP
#define SNROBUST_QUADRATURE_HPP

#include <array>
#include <cstddef>
#include <functional>

namespace snrobust {

// Tolerances for the adaptive integrator; downstream covariance entries
// need ~8 correct digits, hence the tight defaults.
struct QuadratureSpec {
  double abs_tol = 1e-10;
  double rel_tol = 1e-10;
  int max_subdivisions = 200;

  void validate() const;
};

// Adaptive 15-point Gauss-Kronrod integration of f over [a, b].
// Throws IntegrationError if the tolerance is not met within
// max_subdivisions interval splits.
double integrate(const std::function<double(double)>& f, double a, double b,
                 const QuadratureSpec& spec = {});

namespace detail {

// One GK15 panel on [a,b]: returns the Kronrod estimate and writes the
// |GK15 - G7| based error estimate (QUADPACK-style rescaling).
template <std::size_t N>
std::array<double, N> gk15_panel(
    const std::function<void(double, std::array<double, N>&)>& f, double a,
    double b, double& err);

}  // namespace detail

// Adaptive integration of an N-component integrand sharing evaluation
// nodes. The subdivision criterion is the max per-component error against
// max(abs_tol, rel_tol * |component estimate|).
template <std::size_t N>
std::array<double, N> integrate_vec(
    const std::function<void(double, std::array<double, N>&)>& f, double a,
    double b, const QuadratureSpec& spec = {});

}  // namespace snrobust

#endif  // SNROBUST_QUADRATURE_HPP
