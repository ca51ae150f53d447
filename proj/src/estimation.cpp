#include "snrobust/estimation.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <vector>

#include "snrobust/errors.hpp"

namespace snrobust {

namespace {

constexpr double kStepFloor = 1e-8;
constexpr double kSigmaFloor = 1e-10;
constexpr double kGammaDivergenceBound = 1e4;

struct Eta {
  double mu, log_sigma, gamma;
  SnParams theta() const { return {mu, std::exp(log_sigma), gamma}; }
};

double norm3(const Vec3& v) {
  return std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2]);
}

// Objective/gradient pair in theta space, shared by the MDPDE and MLE paths.
struct DescentTarget {
  std::function<double(const SnParams&)> value;
  std::function<Vec3(const SnParams&)> grad;
};

struct DescentOutcome {
  SnParams theta;
  double value;
  double gradient_norm;
  int iterations;
  bool converged;
  std::string note;
};

DescentOutcome descend(const DescentTarget& target, const SnParams& start,
                       const GdConfig& cfg, bool watch_gamma_divergence) {
  Eta eta{start.mu, std::log(start.sigma), start.gamma};
  double fv = target.value(eta.theta());
  DescentOutcome out{start, fv, 0.0, 0, false, {}};

  Vec3 prev_g_eta{};
  Eta prev_eta{};
  bool have_prev = false;

  for (int it = 0; it < cfg.max_iters; ++it) {
    const SnParams theta = eta.theta();
    const Vec3 g = target.grad(theta);
    const Vec3 g_eta = {g[0], g[1] * theta.sigma, g[2]};
    out.gradient_norm = norm3(g);
    out.iterations = it;

    if (watch_gamma_divergence && std::abs(theta.gamma) > kGammaDivergenceBound) {
      out.note = "gamma diverging (monotone likelihood direction)";
      break;
    }

    // Barzilai-Borwein step from the last accepted move, the paper's cited
    // step-size rule; the very first iteration uses the nominal step.
    double step = cfg.step_size;
    if (have_prev) {
      const Vec3 dx = {eta.mu - prev_eta.mu, eta.log_sigma - prev_eta.log_sigma,
                       eta.gamma - prev_eta.gamma};
      const Vec3 dg = {g_eta[0] - prev_g_eta[0], g_eta[1] - prev_g_eta[1],
                       g_eta[2] - prev_g_eta[2]};
      const double num = dx[0] * dg[0] + dx[1] * dg[1] + dx[2] * dg[2];
      const double den = dg[0] * dg[0] + dg[1] * dg[1] + dg[2] * dg[2];
      if (num > 0.0 && den > 0.0)
        step = std::clamp(num / den, 1e-6, 1e4);
    }
    prev_eta = eta;
    prev_g_eta = g_eta;
    have_prev = true;

    Eta trial{};
    double ft = fv;
    bool accepted = false;
    while (step >= kStepFloor) {
      trial = {eta.mu - step * g_eta[0], eta.log_sigma - step * g_eta[1],
               eta.gamma - step * g_eta[2]};
      ft = target.value(trial.theta());
      if (std::isfinite(ft) && ft < fv) {
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) {
      // no descent direction at the step floor: numerically stationary
      out.converged = out.gradient_norm <= cfg.grad_tol;
      break;
    }

    const double rel = std::abs(fv - ft) / std::max(std::abs(fv), 1e-300);
    eta = trial;
    fv = ft;
    if (std::exp(eta.log_sigma) < kSigmaFloor)
      throw BoundaryError("fit: sigma driven to the boundary");

    if (rel < cfg.rel_obj_tol) {
      const Vec3 gn = target.grad(eta.theta());
      out.gradient_norm = norm3(gn);
      if (out.gradient_norm <= cfg.grad_tol) {
        out.converged = true;
        out.iterations = it + 1;
        break;
      }
    }
    out.iterations = it + 1;
  }

  out.theta = eta.theta();
  out.value = fv;
  out.gradient_norm = norm3(target.grad(out.theta));
  if (out.converged && out.gradient_norm > cfg.grad_tol) out.converged = false;
  return out;
}

// One-slot cache of model integrals keyed by (theta, alpha); the line
// search re-evaluates the objective at many trial points but the gradient
// reuses the integrals of the accepted point.
class MdpdeTarget {
 public:
  MdpdeTarget(const Sample& data, double alpha, const GdConfig& cfg)
      : data_(data), alpha_(alpha), cfg_(cfg) {}

  DescentTarget target() {
    return {
        [this](const SnParams& t) {
          return objective_from_integrals(integrals(t), t, data_, alpha_);
        },
        [this](const SnParams& t) {
          return gradient_from_integrals(integrals(t), t, data_, alpha_);
        }};
  }

 private:
  const ModelIntegrals& integrals(const SnParams& t) {
    if (!have_ || t.mu != key_.mu || t.sigma != key_.sigma || t.gamma != key_.gamma) {
      cache_ = model_integrals(t, alpha_, cfg_.quad, cfg_.trunc_halfwidth);
      key_ = t;
      have_ = true;
    }
    return cache_;
  }

  const Sample& data_;
  double alpha_;
  const GdConfig& cfg_;
  SnParams key_{};
  ModelIntegrals cache_{};
  bool have_ = false;
};

DescentTarget mle_target(const Sample& data) {
  const double n = static_cast<double>(data.values.size());
  return {[&data, n](const SnParams& t) {
            double acc = 0.0;
            for (double x : data.values) acc += log_pdf(t, x);
            return -acc / n;
          },
          [&data, n](const SnParams& t) {
            Vec3 acc{};
            for (double x : data.values) {
              const auto u = score(t, x);
              for (int k = 0; k < 3; ++k) acc[k] += u[k];
            }
            return Vec3{-acc[0] / n, -acc[1] / n, -acc[2] / n};
          }};
}

void require_fit_data(const Sample& data) {
  data.validate();
  const double m = data.mean();
  bool spread = false;
  for (double v : data.values)
    if (v != m) spread = true;
  if (!spread) throw DataError("fit: sample has zero variance");
}

FitResult finish(const DescentOutcome& o, const Sample& data, double alpha,
                 FitMethod method, const GdConfig& cfg) {
  FitResult r;
  r.params = o.theta;
  r.alpha = alpha;
  r.objective_value = o.value;
  r.gradient_norm = o.gradient_norm;
  r.iterations = o.iterations;
  r.converged = o.converged;
  r.method = method;
  r.note = o.note;
  const auto diag =
      covariance_with_diagnostics(o.theta, alpha, cfg.quad, cfg.trunc_halfwidth);
  r.covariance = diag.cov;
  r.covariance_well_conditioned = diag.well_conditioned;
  if (!diag.well_conditioned) {
    if (!r.note.empty()) r.note += "; ";
    r.note += "covariance ill-conditioned (cond(J)=" +
              std::to_string(diag.j_condition) + ")";
  }
  r.std_errors = standard_errors(r.covariance, static_cast<int>(data.size()));
  return r;
}

}  // namespace

void GdConfig::validate() const {
  if (!(step_size > 0.0)) throw ConfigError("GdConfig: step_size must be > 0");
  if (max_iters < 1) throw ConfigError("GdConfig: max_iters must be >= 1");
  if (!(rel_obj_tol > 0.0) || !(grad_tol > 0.0))
    throw ConfigError("GdConfig: tolerances must be > 0");
  quad.validate();
}

bool BoundsBox::contains(const SnParams& p) const {
  return p.mu >= mu_lo && p.mu <= mu_hi && p.sigma >= sigma_lo &&
         p.sigma <= sigma_hi && p.gamma >= gamma_lo && p.gamma <= gamma_hi;
}

bool BoundsBox::empty() const {
  return !(mu_lo < mu_hi) || !(sigma_lo < sigma_hi) || !(gamma_lo < gamma_hi) ||
         sigma_hi <= 0.0;
}

void GaConfig::validate() const {
  if (population < 2) throw ConfigError("GaConfig: population must be >= 2");
  if (elites < 0 || elites >= population)
    throw ConfigError("GaConfig: elites must be in [0, population)");
  if (crossover_prob < 0.0 || crossover_prob > 1.0 || mutation_prob < 0.0 ||
      mutation_prob > 1.0)
    throw ConfigError("GaConfig: probabilities must be in [0,1]");
  if (max_generations < 1) throw ConfigError("GaConfig: max_generations must be >= 1");
  if (bounds && bounds->empty()) throw ConfigError("GaConfig: empty bounds box");
  polish.validate();
}

SnParams default_init(const Sample& data) {
  require_fit_data(data);
  const double m = data.mean();
  const double s = data.sd();
  double g1 = 0.0;
  if (data.values.size() >= 3) g1 = data.skewness();
  const double cap = 0.99 * max_abs_skewness();
  g1 = std::clamp(g1, -cap, cap);

  if (std::abs(g1) < 1e-12) return {m, s, 0.0};

  // invert gamma_1 = c t^3 / (1-t^2)^{3/2}, t = delta sqrt(2/pi)
  const double c = 0.5 * (4.0 - M_PI);
  const double R = std::cbrt(g1 / c);
  const double t = R / std::sqrt(1.0 + R * R);
  const double b = std::sqrt(2.0 / M_PI);
  double delta = t / b;
  delta = std::clamp(delta, -0.999, 0.999);
  const double gamma = delta / std::sqrt(1.0 - delta * delta);
  const double sigma = s / std::sqrt(1.0 - t * t);
  return {m - sigma * t, sigma, gamma};
}

namespace {

// Outlier-resistant companion start: median location, scaled MAD, no skew.
// Sample moments are exactly what contamination corrupts, so descents run
// from several starts and keep the best optimum.
SnParams robust_init(const Sample& data) {
  std::vector<double> v = data.values;
  std::sort(v.begin(), v.end());
  const double med = v[v.size() / 2];
  std::vector<double> dev(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) dev[i] = std::abs(v[i] - med);
  std::sort(dev.begin(), dev.end());
  double scale = 1.4826 * dev[dev.size() / 2];
  if (!(scale > 0.0)) scale = data.sd();
  return {med, scale, 0.0};
}

// Moment init on the sample with 1.5 IQR fence outliers dropped; keeps the
// skewness information that robust_init throws away.
std::optional<SnParams> trimmed_init(const Sample& data) {
  std::vector<double> v = data.values;
  std::sort(v.begin(), v.end());
  auto q = [&v](double p) {
    const double h = (static_cast<double>(v.size()) - 1.0) * p;
    const auto lo = static_cast<std::size_t>(h);
    return lo + 1 < v.size() ? v[lo] + (h - static_cast<double>(lo)) * (v[lo + 1] - v[lo])
                             : v[lo];
  };
  const double q1 = q(0.25), q3 = q(0.75), iqr = q3 - q1;
  Sample kept;
  for (double x : data.values)
    if (x >= q1 - 1.5 * iqr && x <= q3 + 1.5 * iqr) kept.values.push_back(x);
  if (kept.values.size() == data.values.size() || kept.values.size() < 5)
    return std::nullopt;
  const double m = kept.mean();
  bool spread = false;
  for (double x : kept.values)
    if (x != m) spread = true;
  if (!spread) return std::nullopt;
  return default_init(kept);
}

}  // namespace

namespace {

DescentOutcome best_descent(const DescentTarget& target, const Sample& data,
                            const GdConfig& cfg, std::optional<SnParams> init,
                            bool watch_gamma) {
  if (init) {
    init->validate();
    return descend(target, *init, cfg, watch_gamma);
  }
  DescentOutcome best = descend(target, default_init(data), cfg, watch_gamma);
  const DescentOutcome b = descend(target, robust_init(data), cfg, watch_gamma);
  if (b.value < best.value) best = b;
  if (const auto ti = trimmed_init(data)) {
    const DescentOutcome c = descend(target, *ti, cfg, watch_gamma);
    if (c.value < best.value) best = c;
  }
  return best;
}

}  // namespace

FitResult fit_gd(const Sample& data, double alpha, const GdConfig& cfg,
                 std::optional<SnParams> init) {
  cfg.validate();
  require_fit_data(data);
  if (!(alpha > 0.0)) throw ConfigError("fit_gd: alpha must be > 0");
  MdpdeTarget t(data, alpha, cfg);
  const auto o = best_descent(t.target(), data, cfg, init, false);
  return finish(o, data, alpha, FitMethod::gradient_descent, cfg);
}

FitResult fit_mle(const Sample& data, const GdConfig& cfg,
                  std::optional<SnParams> init) {
  cfg.validate();
  require_fit_data(data);
  const auto o = best_descent(mle_target(data), data, cfg, init, true);
  return finish(o, data, 0.0, FitMethod::mle, cfg);
}

FitResult fit(const Sample& data, double alpha, const GdConfig& cfg,
              std::optional<SnParams> init) {
  if (alpha == 0.0) return fit_mle(data, cfg, init);
  return fit_gd(data, alpha, cfg, init);
}

FitResult fit_ga(const Sample& data, double alpha, const GaConfig& cfg) {
  cfg.validate();
  require_fit_data(data);
  if (!(alpha > 0.0)) throw ConfigError("fit_ga: alpha must be > 0");

  BoundsBox box;
  if (cfg.bounds) {
    box = *cfg.bounds;
  } else {
    const double sd = data.sd();
    const auto [lo, hi] =
        std::minmax_element(data.values.begin(), data.values.end());
    box = {*lo - 2.0 * sd, *hi + 2.0 * sd, sd / 100.0, 10.0 * sd, -50.0, 50.0};
  }
  if (box.empty()) throw ConfigError("fit_ga: empty bounds box");

  const double widths[3] = {box.mu_hi - box.mu_lo, box.sigma_hi - box.sigma_lo,
                            box.gamma_hi - box.gamma_lo};
  NormalRng rng(cfg.rng_seed);
  MdpdeTarget shared(data, alpha, cfg.polish);

  auto clamp_box = [&box](Vec3 v) {
    v[0] = std::clamp(v[0], box.mu_lo, box.mu_hi);
    v[1] = std::clamp(v[1], box.sigma_lo, box.sigma_hi);
    v[2] = std::clamp(v[2], box.gamma_lo, box.gamma_hi);
    return v;
  };
  auto fitness_of = [&](const Vec3& v) {
    return objective(SnParams{v[0], v[1], v[2]}, data,
                     DpdConfig{alpha, cfg.polish.quad, cfg.polish.trunc_halfwidth});
  };

  const int n = cfg.population;
  std::vector<Vec3> pop(n);
  for (auto& ind : pop)
    ind = {box.mu_lo + widths[0] * rng.uniform(),
           box.sigma_lo + widths[1] * rng.uniform(),
           box.gamma_lo + widths[2] * rng.uniform()};

  std::vector<double> fitness(n);
  std::vector<int> order(n);
  Vec3 best{};
  double best_fitness = std::numeric_limits<double>::infinity();
  int stall = 0;
  int generation = 0;

  for (; generation < cfg.max_generations; ++generation) {
    for (int i = 0; i < n; ++i) fitness[i] = fitness_of(pop[i]);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int a, int b) {
      return fitness[a] != fitness[b] ? fitness[a] < fitness[b] : a < b;
    });

    if (fitness[order[0]] < best_fitness - 1e-12) {
      best_fitness = fitness[order[0]];
      best = pop[order[0]];
      stall = 0;
    } else {
      ++stall;
      if (best_fitness == std::numeric_limits<double>::infinity()) {
        best_fitness = fitness[order[0]];
        best = pop[order[0]];
      }
    }
    if (cfg.stall_generations > 0 && stall >= cfg.stall_generations) break;

    // rank-transformed fitness-proportionate selection: weight N - rank
    std::vector<double> cum(n);
    double total = 0.0;
    for (int r = 0; r < n; ++r) {
      total += static_cast<double>(n - r);
      cum[r] = total;
    }
    auto roulette = [&]() {
      const double u = rng.uniform() * total;
      const auto it = std::lower_bound(cum.begin(), cum.end(), u);
      const int rank = static_cast<int>(it - cum.begin());
      return pop[order[std::min(rank, n - 1)]];
    };

    std::vector<Vec3> next;
    next.reserve(n);
    for (int e = 0; e < cfg.elites; ++e) next.push_back(pop[order[e]]);
    while (static_cast<int>(next.size()) < n) {
      Vec3 child = roulette();
      if (rng.uniform() <= cfg.crossover_prob) {
        const Vec3 other = roulette();
        const double w = rng.uniform();  // blend weight
        for (int k = 0; k < 3; ++k) child[k] = w * child[k] + (1.0 - w) * other[k];
      }
      for (int k = 0; k < 3; ++k)
        if (rng.uniform() <= cfg.mutation_prob)
          child[k] += 0.1 * widths[k] * rng.normal();
      next.push_back(clamp_box(child));
    }
    pop = std::move(next);
  }

  // polish: certify stationarity with a gradient-descent run from the
  // fittest individual
  FitResult r = fit_gd(data, alpha, cfg.polish, SnParams{best[0], best[1], best[2]});
  r.method = FitMethod::genetic;
  r.iterations += generation;
  return r;
}

const char* to_string(FitMethod m) {
  switch (m) {
    case FitMethod::gradient_descent: return "gradient_descent";
    case FitMethod::genetic: return "genetic";
    case FitMethod::mle: return "mle";
  }
  return "unknown";
}

}  // namespace snrobust
