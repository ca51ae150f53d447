#ifndef SNROBUST_SKEW_NORMAL_HPP
#define SNROBUST_SKEW_NORMAL_HPP

#include <array>
#include <cstdint>
#include <random>

#include "snrobust/quadrature.hpp"
#include "snrobust/sample.hpp"

namespace snrobust {

// Parameter triple of the SN(mu, sigma, gamma) model.
struct SnParams {
  double mu = 0.0;
  double sigma = 1.0;
  double gamma = 0.0;

  // Throws ParameterError unless sigma > 0 and all fields are finite.
  void validate() const;

  // delta = gamma / sqrt(1 + gamma^2), in (-1, 1).
  double delta() const;
};

struct SnMoments {
  double mean;
  double variance;
  double skewness;  // gamma_1, bounded by ~0.9953 in absolute value
  double delta;
};

// Density (2/sigma) phi(z) Phi(gamma z), z = (x - mu)/sigma.
double pdf(const SnParams& theta, double x);

// log pdf, stable in both tails; this is what optimizers consume.
double log_pdf(const SnParams& theta, double x);

// CDF via Owen's T: Phi(z) - 2 T(z, gamma).
double cdf(const SnParams& theta, double x, const QuadratureSpec& spec = {});

// Score vector d log f / d(mu, sigma, gamma). The phi/Phi factor goes
// through mills_ratio so tail observations do not produce 0/0.
std::array<double, 3> score(const SnParams& theta, double x);

SnMoments moments(const SnParams& theta);

// Largest possible |skewness| of the family (the delta -> 1 limit).
double max_abs_skewness();

// Deterministic seedable generator: mt19937_64 driving explicit Box-Muller
// pairs. Each Monte Carlo replication derives its own stream from
// (master seed, replication index).
class NormalRng {
 public:
  explicit NormalRng(std::uint64_t seed) : engine_(seed) {}

  double normal();    // one N(0,1) draw
  double uniform();   // one U(0,1) draw in (0, 1]

  static std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index);

 private:
  std::mt19937_64 engine_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

// n i.i.d. draws via the stochastic representation
// X = mu + sigma (delta |Z0| + sqrt(1-delta^2) Z1).
Sample sample(const SnParams& theta, int n, std::uint64_t rng_seed);

}  // namespace snrobust

#endif  // SNROBUST_SKEW_NORMAL_HPP
