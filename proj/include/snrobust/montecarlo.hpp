#ifndef SNROBUST_MONTECARLO_HPP
#define SNROBUST_MONTECARLO_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "snrobust/estimation.hpp"
#include "snrobust/sample.hpp"
#include "snrobust/skew_normal.hpp"

namespace snrobust {

// Mixture design: floor(eps*n) observations come from the contaminant.
struct ContaminationScheme {
  SnParams base;
  SnParams contaminant;
  double epsilon = 0.0;

  void validate() const;  // 0 <= epsilon < 0.5
};

struct BiasMseCell {
  double bias;
  double mse;
};

struct SimulationReport {
  std::string design;
  int n = 0;
  int replications = 0;
  std::vector<double> alpha_grid;
  ContaminationScheme scheme;
  std::optional<ContaminationScheme> alt_scheme;  // level/power runs only
  // bias/MSE runs: metrics[a][k] for parameter k at alpha_grid[a]
  std::vector<std::array<BiasMseCell, 3>> bias_mse;
  // level/power runs: one entry per alpha
  std::vector<double> level;
  std::vector<double> power;
  double gamma0 = 0.0;
  double tau0 = 0.05;
  std::uint64_t master_seed = 0;
  std::vector<int> failures;      // excluded replications per alpha
  std::vector<int> nonconverged;  // kept but flagged per alpha
  double runtime_seconds = 0.0;
  bool failure_warning = false;  // > 5% exclusions at some alpha
};

// n - floor(eps n) base draws plus floor(eps n) contaminant draws,
// shuffled; deterministic per seed.
Sample contaminated_sample(const ContaminationScheme& scheme, int n,
                           std::uint64_t seed);

// Empirical bias and MSE of the fits against scheme.base as truth,
// replicated `reps` times per alpha. Replications run in parallel with
// per-replication derived seeds and a fixed-order reduction.
SimulationReport bias_mse_study(const ContaminationScheme& scheme, int n,
                                int reps, const std::vector<double>& alpha_grid,
                                const GdConfig& fit_cfg, std::uint64_t seed,
                                int threads = 0);

// Empirical level (null scheme) and power (alt scheme) of the symmetry
// Wald-type test for gamma = gamma0 at significance tau0.
SimulationReport level_power_study(const ContaminationScheme& null_scheme,
                                   const ContaminationScheme& alt_scheme, int n,
                                   int reps, const std::vector<double>& alpha_grid,
                                   double gamma0, double tau0,
                                   const GdConfig& fit_cfg, std::uint64_t seed,
                                   int threads = 0);

struct RelativeDifference {
  Vec3 percent;                 // |full - clean| / |full| * 100
  std::array<bool, 3> flagged;  // |full| below the division guard
};

// Componentwise percentage change between a full-data and an
// outlier-deleted fit at the same alpha.
RelativeDifference relative_difference(const FitResult& fit_full,
                                       const FitResult& fit_clean);

struct BoxplotFilterResult {
  Sample kept;
  std::vector<std::size_t> removed_indices;
  double fence_lo;
  double fence_hi;
};

// Removes points outside [Q1 - 1.5 IQR, Q3 + 1.5 IQR] (type-7 quantiles).
BoxplotFilterResult outlier_filter_boxplot(const Sample& data);

// Type-7 sample quantile (linear interpolation of order statistics).
double quantile_type7(std::vector<double> sorted_values, double p);

}  // namespace snrobust

#endif  // SNROBUST_MONTECARLO_HPP
