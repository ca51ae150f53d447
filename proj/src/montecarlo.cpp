#include "snrobust/montecarlo.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <limits>
#include <thread>

#include "snrobust/errors.hpp"
#include "snrobust/hypothesis.hpp"

namespace snrobust {

namespace {

int resolve_threads(int requested) {
  if (requested > 0) return requested;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

// Runs fn(rep) for rep in [0, reps) across a fixed thread count; results
// land in rep-indexed slots so the reduction order never depends on the
// schedule.
template <typename Fn>
void parallel_for_reps(int reps, int threads, Fn&& fn) {
  if (threads <= 1) {
    for (int r = 0; r < reps; ++r) fn(r);
    return;
  }
  std::vector<std::thread> pool;
  std::atomic<int> next{0};
  for (int t = 0; t < threads; ++t)
    pool.emplace_back([&]() {
      for (;;) {
        const int r = next.fetch_add(1);
        if (r >= reps) return;
        fn(r);
      }
    });
  for (auto& th : pool) th.join();
}

struct RepFit {
  Vec3 params{};
  bool ok = false;
  bool converged = false;
  bool reject = false;
};

}  // namespace

void ContaminationScheme::validate() const {
  base.validate();
  contaminant.validate();
  if (!(epsilon >= 0.0 && epsilon < 0.5))
    throw ConfigError("ContaminationScheme: epsilon must be in [0, 0.5)");
}

Sample contaminated_sample(const ContaminationScheme& scheme, int n,
                           std::uint64_t seed) {
  scheme.validate();
  if (n < 2) throw ParameterError("contaminated_sample: n must be >= 2");
  const int m = static_cast<int>(std::floor(scheme.epsilon * n));
  Sample out = sample(scheme.base, n - m, NormalRng::derive_seed(seed, 1));
  if (m > 0) {
    const Sample bad = sample(scheme.contaminant, m, NormalRng::derive_seed(seed, 2));
    out.values.insert(out.values.end(), bad.values.begin(), bad.values.end());
  }
  // Fisher-Yates with the derived stream keeps the draw deterministic.
  NormalRng rng(NormalRng::derive_seed(seed, 3));
  for (std::size_t i = out.values.size(); i > 1; --i) {
    const auto j = static_cast<std::size_t>(rng.uniform() * static_cast<double>(i));
    std::swap(out.values[i - 1], out.values[std::min(j, i - 1)]);
  }
  out.label = "contaminated";
  out.source = "seed:" + std::to_string(seed);
  return out;
}

SimulationReport bias_mse_study(const ContaminationScheme& scheme, int n,
                                int reps, const std::vector<double>& alpha_grid,
                                const GdConfig& fit_cfg, std::uint64_t seed,
                                int threads) {
  scheme.validate();
  if (reps < 2) throw ConfigError("bias_mse_study: reps must be >= 2");
  if (alpha_grid.empty()) throw ConfigError("bias_mse_study: empty alpha grid");
  const auto t0 = std::chrono::steady_clock::now();

  const std::size_t na = alpha_grid.size();
  std::vector<std::vector<RepFit>> results(static_cast<std::size_t>(reps),
                                           std::vector<RepFit>(na));

  parallel_for_reps(reps, resolve_threads(threads), [&](int r) {
    const std::uint64_t rep_seed =
        NormalRng::derive_seed(seed, static_cast<std::uint64_t>(r));
    const Sample data = contaminated_sample(scheme, n, rep_seed);
    for (std::size_t a = 0; a < na; ++a) {
      try {
        const FitResult f = fit(data, alpha_grid[a], fit_cfg);
        results[r][a].params = {f.params.mu, f.params.sigma, f.params.gamma};
        results[r][a].ok = std::isfinite(f.params.mu) &&
                           std::isfinite(f.params.sigma) &&
                           std::isfinite(f.params.gamma);
        results[r][a].converged = f.converged;
      } catch (const std::exception&) {
        results[r][a].ok = false;
      }
    }
  });

  SimulationReport rep;
  rep.design = "bias_mse";
  rep.n = n;
  rep.replications = reps;
  rep.alpha_grid = alpha_grid;
  rep.scheme = scheme;
  rep.master_seed = seed;
  rep.failures.assign(na, 0);
  rep.nonconverged.assign(na, 0);

  const Vec3 truth = {scheme.base.mu, scheme.base.sigma, scheme.base.gamma};
  for (std::size_t a = 0; a < na; ++a) {
    Vec3 sum{}, sumsq{};
    int kept = 0;
    for (int r = 0; r < reps; ++r) {
      const RepFit& f = results[r][a];
      if (!f.ok) {
        ++rep.failures[a];
        continue;
      }
      if (!f.converged) ++rep.nonconverged[a];
      ++kept;
      for (int k = 0; k < 3; ++k) {
        const double d = f.params[k] - truth[k];
        sum[k] += d;
        sumsq[k] += d * d;
      }
    }
    std::array<BiasMseCell, 3> row{};
    for (int k = 0; k < 3; ++k) {
      row[k].bias = kept > 0 ? sum[k] / kept : std::nan("");
      row[k].mse = kept > 0 ? sumsq[k] / kept : std::nan("");
    }
    rep.bias_mse.push_back(row);
    if (rep.failures[a] > 0.05 * reps) rep.failure_warning = true;
  }

  rep.runtime_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return rep;
}

SimulationReport level_power_study(const ContaminationScheme& null_scheme,
                                   const ContaminationScheme& alt_scheme, int n,
                                   int reps, const std::vector<double>& alpha_grid,
                                   double gamma0, double tau0,
                                   const GdConfig& fit_cfg, std::uint64_t seed,
                                   int threads) {
  null_scheme.validate();
  alt_scheme.validate();
  if (reps < 2) throw ConfigError("level_power_study: reps must be >= 2");
  if (alpha_grid.empty()) throw ConfigError("level_power_study: empty alpha grid");
  if (!(tau0 > 0.0 && tau0 < 1.0))
    throw ConfigError("level_power_study: tau0 must be in (0,1)");
  const auto t0 = std::chrono::steady_clock::now();

  const std::size_t na = alpha_grid.size();
  // slot 0: null design, slot 1: alternative design
  std::vector<std::array<std::vector<RepFit>, 2>> results(
      static_cast<std::size_t>(reps));
  for (auto& r : results) r = {std::vector<RepFit>(na), std::vector<RepFit>(na)};

  parallel_for_reps(reps, resolve_threads(threads), [&](int r) {
    for (int design = 0; design < 2; ++design) {
      const ContaminationScheme& scheme = design == 0 ? null_scheme : alt_scheme;
      const std::uint64_t rep_seed = NormalRng::derive_seed(
          seed + static_cast<std::uint64_t>(design) * 0x9e3779b9ULL,
          static_cast<std::uint64_t>(r));
      const Sample data = contaminated_sample(scheme, n, rep_seed);
      for (std::size_t a = 0; a < na; ++a) {
        try {
          const FitResult f = fit(data, alpha_grid[a], fit_cfg);
          const WaldTestResult w = wald_test_from_fit(
              f, data.size(), HypothesisSpec::gamma_equals(gamma0));
          results[r][design][a].ok = std::isfinite(w.statistic);
          results[r][design][a].reject = w.p_value < tau0;
          results[r][design][a].converged = f.converged;
        } catch (const std::exception&) {
          results[r][design][a].ok = false;
        }
      }
    }
  });

  SimulationReport rep;
  rep.design = "level_power";
  rep.n = n;
  rep.replications = reps;
  rep.alpha_grid = alpha_grid;
  rep.scheme = null_scheme;
  rep.alt_scheme = alt_scheme;
  rep.gamma0 = gamma0;
  rep.tau0 = tau0;
  rep.master_seed = seed;
  rep.failures.assign(na, 0);
  rep.nonconverged.assign(na, 0);

  for (std::size_t a = 0; a < na; ++a) {
    int kept_null = 0, rej_null = 0, kept_alt = 0, rej_alt = 0;
    for (int r = 0; r < reps; ++r) {
      const RepFit& fn = results[r][0][a];
      const RepFit& fa = results[r][1][a];
      if (fn.ok) {
        ++kept_null;
        rej_null += fn.reject;
        if (!fn.converged) ++rep.nonconverged[a];
      } else {
        ++rep.failures[a];
      }
      if (fa.ok) {
        ++kept_alt;
        rej_alt += fa.reject;
      } else {
        ++rep.failures[a];
      }
    }
    rep.level.push_back(kept_null > 0 ? static_cast<double>(rej_null) / kept_null
                                      : std::nan(""));
    rep.power.push_back(kept_alt > 0 ? static_cast<double>(rej_alt) / kept_alt
                                     : std::nan(""));
    if (rep.failures[a] > 0.05 * 2 * reps) rep.failure_warning = true;
  }

  rep.runtime_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return rep;
}

RelativeDifference relative_difference(const FitResult& fit_full,
                                       const FitResult& fit_clean) {
  if (fit_full.alpha != fit_clean.alpha)
    throw ParameterError("relative_difference: fits must share alpha");
  const Vec3 full = {fit_full.params.mu, fit_full.params.sigma,
                     fit_full.params.gamma};
  const Vec3 clean = {fit_clean.params.mu, fit_clean.params.sigma,
                      fit_clean.params.gamma};
  RelativeDifference rd{};
  for (int k = 0; k < 3; ++k) {
    if (std::abs(full[k]) < 1e-8) {
      rd.flagged[k] = true;
      rd.percent[k] = std::numeric_limits<double>::infinity();
    } else {
      rd.percent[k] = std::abs(full[k] - clean[k]) / std::abs(full[k]) * 100.0;
    }
  }
  return rd;
}

double quantile_type7(std::vector<double> sorted_values, double p) {
  const std::size_t n = sorted_values.size();
  if (n == 0) throw DataError("quantile_type7: empty");
  if (p <= 0.0) return sorted_values.front();
  if (p >= 1.0) return sorted_values.back();
  const double h = (static_cast<double>(n) - 1.0) * p;
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const double frac = h - static_cast<double>(lo);
  if (lo + 1 >= n) return sorted_values[lo];
  return sorted_values[lo] + frac * (sorted_values[lo + 1] - sorted_values[lo]);
}

BoxplotFilterResult outlier_filter_boxplot(const Sample& data) {
  data.validate();
  if (data.values.size() < 5)
    throw DataError("outlier_filter_boxplot: need n >= 5");
  std::vector<double> sorted = data.values;
  std::sort(sorted.begin(), sorted.end());
  const double q1 = quantile_type7(sorted, 0.25);
  const double q3 = quantile_type7(sorted, 0.75);
  const double iqr = q3 - q1;

  BoxplotFilterResult res;
  res.fence_lo = q1 - 1.5 * iqr;
  res.fence_hi = q3 + 1.5 * iqr;
  res.kept.label = data.label;
  res.kept.source = data.source + " (boxplot-filtered)";
  for (std::size_t i = 0; i < data.values.size(); ++i) {
    const double v = data.values[i];
    if (v < res.fence_lo || v > res.fence_hi)
      res.removed_indices.push_back(i);
    else
      res.kept.values.push_back(v);
  }
  if (res.kept.values.empty())
    throw DataError("outlier_filter_boxplot: all points removed");
  return res;
}

}  // namespace snrobust
