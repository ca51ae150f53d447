#ifndef SNROBUST_SPECIAL_FUNCTIONS_HPP
#define SNROBUST_SPECIAL_FUNCTIONS_HPP

#include "snrobust/quadrature.hpp"

namespace snrobust {

// Standard normal density (2*pi)^{-1/2} exp(-z^2/2).
double std_normal_pdf(double z);

// Standard normal CDF via erfc; relative error ~1e-15 over the real line.
double std_normal_cdf(double z);

// log Phi(z), stable far into the left tail (no underflow down to z=-40).
double std_normal_log_cdf(double z);

// Owen's T function T(h,a) = (1/2pi) int_0^a exp(-h^2(1+x^2)/2)/(1+x^2) dx.
// Evaluated by adaptive quadrature of the defining integral after symmetry
// reduction to h >= 0, 0 <= a <= 1 (the a > 1 case uses the standard
// reduction identity).
double owens_t(double h, double a, const QuadratureSpec& spec = {});

// Mills-type ratio phi(z)/Phi(z): strictly positive, strictly decreasing,
// no overflow/underflow for |z| <= 40. Below z = -12 the ratio is computed
// from the tail continued fraction instead of the naive quotient.
double mills_ratio(double z);

}  // namespace snrobust

#endif  // SNROBUST_SPECIAL_FUNCTIONS_HPP
