#ifndef SNROBUST_QUADRATURE_IMPL_HPP
#define SNROBUST_QUADRATURE_IMPL_HPP

#include <algorithm>
#include <cmath>
#include <vector>

#include "snrobust/errors.hpp"
#include "snrobust/quadrature.hpp"

namespace snrobust {
namespace detail {

// 15-point Kronrod abscissae; even indices (1-based xgk(2), xgk(4), ...)
// carry the embedded 7-point Gauss rule.
inline constexpr double kGk15Nodes[8] = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144838258730, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.0};

inline constexpr double kGk15Weights[8] = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};

inline constexpr double kG7Weights[4] = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

template <std::size_t N>
std::array<double, N> gk15_panel(
    const std::function<void(double, std::array<double, N>&)>& f, double a,
    double b, double& err) {
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);

  std::array<double, N> fc{};
  f(center, fc);
  std::array<double, N> resk{}, resg{}, resabs{};
  for (std::size_t c = 0; c < N; ++c) {
    resk[c] = kGk15Weights[7] * fc[c];
    resg[c] = kG7Weights[3] * fc[c];
    resabs[c] = std::abs(resk[c]);
  }

  std::array<std::array<double, N>, 7> fv1{}, fv2{};
  for (int j = 0; j < 7; ++j) {
    const double dx = half * kGk15Nodes[j];
    f(center - dx, fv1[j]);
    f(center + dx, fv2[j]);
    for (std::size_t c = 0; c < N; ++c) {
      const double fsum = fv1[j][c] + fv2[j][c];
      resk[c] += kGk15Weights[j] * fsum;
      resabs[c] += kGk15Weights[j] * (std::abs(fv1[j][c]) + std::abs(fv2[j][c]));
      if (j % 2 == 1) resg[c] += kG7Weights[j / 2] * fsum;
    }
  }

  err = 0.0;
  std::array<double, N> out{};
  for (std::size_t c = 0; c < N; ++c) {
    const double reskh = 0.5 * resk[c];
    double resasc = kGk15Weights[7] * std::abs(fc[c] - reskh);
    for (int j = 0; j < 7; ++j) {
      resasc += kGk15Weights[j] *
                (std::abs(fv1[j][c] - reskh) + std::abs(fv2[j][c] - reskh));
    }
    resasc *= half;
    double e = std::abs(resk[c] - resg[c]) * half;
    if (resasc != 0.0 && e != 0.0)
      e = resasc * std::min(1.0, std::pow(200.0 * e / resasc, 1.5));
    err = std::max(err, e);
    out[c] = resk[c] * half;
  }
  return out;
}

template <std::size_t N>
struct Segment {
  double a, b, err;
  std::array<double, N> value;
};

}  // namespace detail

template <std::size_t N>
std::array<double, N> integrate_vec(
    const std::function<void(double, std::array<double, N>&)>& f, double a,
    double b, const QuadratureSpec& spec) {
  spec.validate();
  if (!(std::isfinite(a) && std::isfinite(b)))
    throw IntegrationError("integrate: non-finite interval endpoints");
  if (a == b) return {};

  std::vector<detail::Segment<N>> segs;
  segs.reserve(static_cast<std::size_t>(spec.max_subdivisions) + 1);
  double err0;
  segs.push_back({a, b, 0.0, detail::gk15_panel<N>(f, a, b, err0)});
  segs.front().err = err0;

  auto totals = [&segs]() {
    std::array<double, N> v{};
    double e = 0.0;
    for (const auto& s : segs) {
      e += s.err;
      for (std::size_t c = 0; c < N; ++c) v[c] += s.value[c];
    }
    return std::pair(v, e);
  };

  while (true) {
    auto [value, err] = totals();
    double scale = 0.0;
    for (std::size_t c = 0; c < N; ++c) scale = std::max(scale, std::abs(value[c]));
    const double tol = std::max(spec.abs_tol, spec.rel_tol * scale);
    if (err <= tol) return value;
    if (static_cast<int>(segs.size()) >= spec.max_subdivisions)
      throw IntegrationError("integrate: tolerance not reached within " +
                             std::to_string(spec.max_subdivisions) +
                             " subdivisions (err=" + std::to_string(err) + ")");

    auto worst = std::max_element(
        segs.begin(), segs.end(),
        [](const auto& x, const auto& y) { return x.err < y.err; });
    const double sa = worst->a, sb = worst->b, mid = 0.5 * (sa + sb);
    double e1, e2;
    auto v1 = detail::gk15_panel<N>(f, sa, mid, e1);
    auto v2 = detail::gk15_panel<N>(f, mid, sb, e2);
    *worst = {sa, mid, e1, v1};
    segs.push_back({mid, sb, e2, v2});
  }
}

}  // namespace snrobust

#endif  // SNROBUST_QUADRATURE_IMPL_HPP
