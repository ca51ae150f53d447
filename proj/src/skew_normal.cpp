#include "snrobust/skew_normal.hpp"

#include <cmath>

#include "snrobust/errors.hpp"
#include "snrobust/special_functions.hpp"

namespace snrobust {

namespace {
constexpr double kLog2 = 0.6931471805599453094172321;
constexpr double kHalfLog2Pi = 0.9189385332046727417803297;
constexpr double kSqrt2OverPi = 0.7978845608028653558798921;  // sqrt(2/pi)

void require_finite_x(double x) {
  if (!std::isfinite(x)) throw ParameterError("skew_normal: non-finite x");
}
}  // namespace

void SnParams::validate() const {
  if (!std::isfinite(mu) || !std::isfinite(sigma) || !std::isfinite(gamma))
    throw ParameterError("SnParams: non-finite field");
  if (!(sigma > 0.0)) throw ParameterError("SnParams: sigma must be > 0");
}

double SnParams::delta() const { return gamma / std::sqrt(1.0 + gamma * gamma); }

double pdf(const SnParams& theta, double x) { return std::exp(log_pdf(theta, x)); }

double log_pdf(const SnParams& theta, double x) {
  theta.validate();
  require_finite_x(x);
  const double z = (x - theta.mu) / theta.sigma;
  return kLog2 - std::log(theta.sigma) - 0.5 * z * z - kHalfLog2Pi +
         std_normal_log_cdf(theta.gamma * z);
}

double cdf(const SnParams& theta, double x, const QuadratureSpec& spec) {
  theta.validate();
  require_finite_x(x);
  const double z = (x - theta.mu) / theta.sigma;
  double v = std_normal_cdf(z) - 2.0 * owens_t(z, theta.gamma, spec);
  if (v < 0.0) v = 0.0;
  if (v > 1.0) v = 1.0;
  return v;
}

std::array<double, 3> score(const SnParams& theta, double x) {
  theta.validate();
  require_finite_x(x);
  const double s = theta.sigma, g = theta.gamma;
  const double z = (x - theta.mu) / s;
  const double r = mills_ratio(g * z);
  return {z / s - g * r / s, (z * z - 1.0 - g * z * r) / s, z * r};
}

SnMoments moments(const SnParams& theta) {
  theta.validate();
  const double d = theta.delta();
  const double bd = kSqrt2OverPi * d;
  SnMoments m;
  m.delta = d;
  m.mean = theta.mu + theta.sigma * bd;
  m.variance = theta.sigma * theta.sigma * (1.0 - bd * bd);
  m.skewness = 0.5 * (4.0 - M_PI) * bd * bd * bd / std::pow(1.0 - bd * bd, 1.5);
  return m;
}

double max_abs_skewness() {
  const double b2 = 2.0 / M_PI;
  return 0.5 * (4.0 - M_PI) * std::pow(b2, 1.5) / std::pow(1.0 - b2, 1.5);
}

double NormalRng::uniform() {
  // 53-bit mantissa draw in (0, 1]
  return (static_cast<double>(engine_() >> 11) + 1.0) * 0x1p-53;
}

double NormalRng::normal() {
  if (have_spare_) {
    have_spare_ = false;
    return spare_;
  }
  const double u1 = uniform();
  const double u2 = uniform();
  const double rad = std::sqrt(-2.0 * std::log(u1));
  const double ang = 2.0 * M_PI * u2;
  spare_ = rad * std::sin(ang);
  have_spare_ = true;
  return rad * std::cos(ang);
}

std::uint64_t NormalRng::derive_seed(std::uint64_t master, std::uint64_t index) {
  // splitmix64 finalizer on (master, index)
  std::uint64_t x = master + 0x9e3779b97f4a7c15ULL * (index + 1);
  x ^= x >> 30;
  x *= 0xbf58476d1ce4e5b9ULL;
  x ^= x >> 27;
  x *= 0x94d049bb133111ebULL;
  x ^= x >> 31;
  return x;
}

Sample sample(const SnParams& theta, int n, std::uint64_t rng_seed) {
  theta.validate();
  if (n < 1) throw ParameterError("sample: n must be >= 1");
  const double d = theta.delta();
  const double comp = std::sqrt(1.0 - d * d);
  NormalRng rng(rng_seed);
  Sample out;
  out.values.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    const double z0 = rng.normal();
    const double z1 = rng.normal();
    out.values.push_back(theta.mu + theta.sigma * (d * std::abs(z0) + comp * z1));
  }
  out.label = "sn-sample";
  out.source = "seed:" + std::to_string(rng_seed);
  return out;
}

}  // namespace snrobust
