#ifndef SNROBUST_ESTIMATION_HPP
#define SNROBUST_ESTIMATION_HPP

#include <cstdint>
#include <optional>
#include <string>

#include "snrobust/asymptotics.hpp"
#include "snrobust/dpd.hpp"
#include "snrobust/sample.hpp"
#include "snrobust/skew_normal.hpp"

namespace snrobust {

struct GdConfig {
  double step_size = 0.04;  // initial step, halved by backtracking
  int max_iters = 10000;
  double rel_obj_tol = 1e-10;
  double grad_tol = 1e-6;
  QuadratureSpec quad{};
  double trunc_halfwidth = 15.0;

  void validate() const;
};

struct BoundsBox {
  double mu_lo, mu_hi;
  double sigma_lo, sigma_hi;
  double gamma_lo, gamma_hi;

  bool contains(const SnParams& p) const;
  bool empty() const;
};

struct GaConfig {
  int population = 50;
  int elites = 2;
  double crossover_prob = 0.8;
  double mutation_prob = 0.1;
  int max_generations = 5000;
  // stop early when the elite fitness has not improved for this many
  // generations (0 disables early stopping)
  int stall_generations = 200;
  std::uint64_t rng_seed = 1;
  std::optional<BoundsBox> bounds;  // default: data-driven box
  GdConfig polish{};

  void validate() const;
};

enum class FitMethod { gradient_descent, genetic, mle };

struct FitResult {
  SnParams params;
  double alpha = 0.0;
  Vec3 std_errors{};
  AsymptoticCovariance covariance{};
  bool covariance_well_conditioned = true;
  double objective_value = 0.0;
  double gradient_norm = 0.0;
  int iterations = 0;
  bool converged = false;
  FitMethod method = FitMethod::gradient_descent;
  std::string note;  // non-fatal diagnostics (boundary, conditioning, ...)
};

// Moment-matched initializer: solves the mean/variance/skewness equations
// with sample moments, clamping the sample skewness into the attainable
// range of the family.
SnParams default_init(const Sample& data);

// MDPDE by gradient descent on (mu, log sigma, gamma) with Armijo
// backtracking from the paper's step size. alpha must be > 0.
FitResult fit_gd(const Sample& data, double alpha, const GdConfig& cfg = {},
                 std::optional<SnParams> init = std::nullopt);

// MDPDE by a real-coded genetic algorithm (fitness-proportionate selection
// on ranks, blend crossover, Gaussian mutation, elitism), polished by a
// short gradient-descent run from the fittest individual.
FitResult fit_ga(const Sample& data, double alpha, const GaConfig& cfg = {});

// Maximum likelihood via the same descent machinery on the mean negative
// log-likelihood; records method = mle and alpha = 0.
FitResult fit_mle(const Sample& data, const GdConfig& cfg = {},
                  std::optional<SnParams> init = std::nullopt);

// Dispatch helper: alpha > 0 fits the MDPDE, alpha == 0 the MLE.
FitResult fit(const Sample& data, double alpha, const GdConfig& cfg = {},
              std::optional<SnParams> init = std::nullopt);

const char* to_string(FitMethod m);

}  // namespace snrobust

#endif  // SNROBUST_ESTIMATION_HPP
