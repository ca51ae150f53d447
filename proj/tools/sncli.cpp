// Command-line front end: fitting, Wald-type testing, influence-function
// diagnostics, ARE and contiguous-power tables, and the Monte Carlo
// contamination harness.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "snrobust/asymptotics.hpp"
#include "snrobust/errors.hpp"
#include "snrobust/estimation.hpp"
#include "snrobust/hypothesis.hpp"
#include "snrobust/io.hpp"
#include "snrobust/montecarlo.hpp"
#include "snrobust/robustness.hpp"

namespace {

using namespace snrobust;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitIo = 2;
constexpr int kExitNumerical = 3;

SnParams parse_theta(const std::string& s) {
  SnParams p;
  if (std::sscanf(s.c_str(), "%lf,%lf,%lf", &p.mu, &p.sigma, &p.gamma) != 3)
    throw CLI::ValidationError("theta", "expected mu,sigma,gamma");
  return p;
}

std::vector<double> parse_grid(const std::string& s) {
  // "lo:hi:step" or comma list
  std::vector<double> out;
  double lo, hi, step;
  if (std::sscanf(s.c_str(), "%lf:%lf:%lf", &lo, &hi, &step) == 3 && step > 0) {
    for (double v = lo; v <= hi + 1e-12; v += step) out.push_back(v);
    return out;
  }
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ',')) out.push_back(std::stod(tok));
  return out;
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path);
  out << content;
  if (!out.good()) throw IoError("write failed for " + path);
}

HypothesisSpec parse_hypothesis(const std::string& s) {
  double v;
  if (std::sscanf(s.c_str(), "gamma=%lf", &v) == 1)
    return HypothesisSpec::gamma_equals(v);
  if (std::sscanf(s.c_str(), "sigma=%lf", &v) == 1)
    return HypothesisSpec::sigma_equals(v);
  if (std::sscanf(s.c_str(), "mu=%lf", &v) == 1)
    return HypothesisSpec::mu_equals(v);
  throw CLI::ValidationError("hypothesis",
                             "expected gamma=<v>, sigma=<v> or mu=<v>");
}

struct CommonOpts {
  std::string input, column, output;
  std::vector<double> alphas{0.0, 0.1, 0.3, 0.5, 0.7, 1.0};
  std::uint64_t seed = 1;
  std::string format = "json";
  std::string alpha_spec;
};

void add_alpha_option(CLI::App* cmd, CommonOpts& o) {
  cmd->add_option("--alpha", o.alpha_spec,
                  "alpha grid, comma list or lo:hi:step (default paper grid)");
}

std::vector<double> resolve_alphas(const CommonOpts& o) {
  if (o.alpha_spec.empty()) return o.alphas;
  auto v = parse_grid(o.alpha_spec);
  for (double a : v)
    if (a < 0.0) throw CLI::ValidationError("alpha", "alpha must be >= 0");
  return v;
}

int cmd_fit(const CommonOpts& o, bool drop_outliers) {
  int skipped = 0;
  const Sample data = ingest_csv(o.input, o.column, &skipped);
  if (skipped > 0)
    std::cerr << "note: skipped " << skipped << " non-numeric cells\n";
  const auto alphas = resolve_alphas(o);

  bool any_failed = false;
  if (!drop_outliers) {
    std::vector<FitResult> fits;
    for (double a : alphas) {
      try {
        fits.push_back(fit(data, a));
      } catch (const std::exception& e) {
        std::cerr << "fit at alpha=" << a << " failed: " << e.what() << "\n";
        any_failed = true;
      }
    }
    if (fits.empty()) throw NumericalError("all fits failed");
    write_file(o.output, fit_report_json(fits, data));
    return any_failed ? kExitNumerical : kExitOk;
  }

  const auto filtered = outlier_filter_boxplot(data);
  DropOutlierReport report;
  report.removed_indices = filtered.removed_indices;
  for (double a : alphas) {
    try {
      FitResult full = fit(data, a);
      FitResult clean = fit(filtered.kept, a);
      report.rds.push_back(relative_difference(full, clean));
      report.full_fits.push_back(std::move(full));
      report.clean_fits.push_back(std::move(clean));
    } catch (const std::exception& e) {
      std::cerr << "fit at alpha=" << a << " failed: " << e.what() << "\n";
      any_failed = true;
    }
  }
  if (report.full_fits.empty()) throw NumericalError("all fits failed");
  write_file(o.output, drop_outlier_report_json(report, data));
  return any_failed ? kExitNumerical : kExitOk;
}

int cmd_test(const CommonOpts& o, const std::string& hypothesis,
             const std::string& pvalue_csv) {
  const Sample data = ingest_csv(o.input, o.column);
  const HypothesisSpec hyp = parse_hypothesis(hypothesis);
  const auto alphas = resolve_alphas(o);

  std::vector<WaldTestResult> results;
  bool any_failed = false;
  for (double a : alphas) {
    try {
      results.push_back(wald_test(data, a, hyp));
    } catch (const std::exception& e) {
      std::cerr << "test at alpha=" << a << " failed: " << e.what() << "\n";
      any_failed = true;
    }
  }
  if (results.empty()) throw NumericalError("all tests failed");
  write_file(o.output, test_report_json(results, data));
  if (!pvalue_csv.empty()) write_file(pvalue_csv, pvalue_curve_csv(results));
  return any_failed ? kExitNumerical : kExitOk;
}

int cmd_are(const CommonOpts& o, const std::vector<std::string>& theta_specs) {
  std::vector<SnParams> thetas;
  if (theta_specs.empty()) {
    thetas = {{0, 1, 1}, {0, 1, 0}, {0, 1, -1}};
  } else {
    for (const auto& s : theta_specs) thetas.push_back(parse_theta(s));
  }
  std::vector<double> alphas = o.alpha_spec.empty()
                                   ? std::vector<double>{0, 0.05, 0.1, 0.2, 0.3, 0.5, 0.7, 1.0}
                                   : resolve_alphas(o);
  const AreTable t = are_table(thetas, alphas);
  write_file(o.output, are_table_csv(t));
  return kExitOk;
}

int cmd_power(const CommonOpts& o, const std::string& d_spec, double tau0,
              double gamma0) {
  const std::vector<double> d_grid =
      d_spec.empty() ? std::vector<double>{3.0, 3.5, 4.0, 4.5, 5.0, 5.5, 6.0, 7.0, 8.0, 9.0}
                     : parse_grid(d_spec);
  std::vector<double> alphas = o.alpha_spec.empty()
                                   ? std::vector<double>{0, 0.05, 0.1, 0.2, 0.3, 0.5, 0.7, 1.0}
                                   : resolve_alphas(o);
  const auto hyp = HypothesisSpec::gamma_equals(gamma0);
  const SnParams theta0{0, 1, gamma0};
  std::vector<std::vector<double>> rows;
  for (double d : d_grid) {
    std::vector<double> row;
    for (double a : alphas)
      row.push_back(contiguous_power(theta0, a, hyp, {0, 0, d}, tau0));
    rows.push_back(std::move(row));
  }
  write_file(o.output, power_table_csv(d_grid, alphas, rows));
  return kExitOk;
}

int cmd_diagnose(const CommonOpts& o, const std::string& kind_name,
                 const std::string& theta_spec, const std::string& grid_spec,
                 double gamma0, double d, double tau0) {
  const SnParams theta = parse_theta(theta_spec);
  const std::vector<double> grid = parse_grid(grid_spec);
  IfKind kind;
  if (kind_name == "estimator_if")
    kind = IfKind::estimator_if;
  else if (kind_name == "test_if2")
    kind = IfKind::test_if2;
  else if (kind_name == "test_pif")
    kind = IfKind::test_pif;
  else
    throw CLI::ValidationError("kind", "expected estimator_if|test_if2|test_pif");

  const auto hyp = HypothesisSpec::gamma_equals(gamma0);
  const Vec3 dvec{0, 0, d};
  std::vector<IfCurve> curves;
  for (double a : resolve_alphas(o))
    curves.push_back(if_curve(kind, theta, a, grid,
                              kind == IfKind::estimator_if ? nullptr : &hyp,
                              kind == IfKind::test_pif ? &dvec : nullptr, tau0));
  write_file(o.output, if_curve_csv(curves));
  return kExitOk;
}

int cmd_simulate(const CommonOpts& o, const std::string& design,
                 const std::string& base_spec, const std::string& cont_spec,
                 const std::string& alt_spec, const std::string& alt_cont_spec,
                 double epsilon, int n, int reps, double gamma0, double tau0,
                 int threads, int max_iters) {
  GdConfig cfg;
  cfg.max_iters = max_iters;
  SimulationReport rep;
  if (design == "bias_mse") {
    const ContaminationScheme scheme{parse_theta(base_spec),
                                     parse_theta(cont_spec), epsilon};
    rep = bias_mse_study(scheme, n, reps, resolve_alphas(o), cfg, o.seed, threads);
  } else if (design == "level_power") {
    const ContaminationScheme null_scheme{parse_theta(base_spec),
                                          parse_theta(cont_spec), epsilon};
    const ContaminationScheme alt_scheme{parse_theta(alt_spec),
                                         parse_theta(alt_cont_spec), epsilon};
    rep = level_power_study(null_scheme, alt_scheme, n, reps, resolve_alphas(o),
                            gamma0, tau0, cfg, o.seed, threads);
  } else {
    throw CLI::ValidationError("design", "expected bias_mse|level_power");
  }
  if (o.format == "csv")
    write_file(o.output, simulation_report_csv(rep));
  else
    write_file(o.output, simulation_report_json(rep));
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Robust minimum density power divergence inference for the "
               "three-parameter skew-normal model"};
  app.require_subcommand(1);

  CommonOpts o;

  auto* fit_cmd = app.add_subcommand("fit", "fit SN parameters by MDPDE/MLE");
  bool drop_outliers = false;
  fit_cmd->add_option("--input", o.input, "input CSV path")->required();
  fit_cmd->add_option("--column", o.column, "column name")->required();
  fit_cmd->add_option("--output", o.output, "output JSON path")->required();
  add_alpha_option(fit_cmd, o);
  fit_cmd->add_flag("--drop-outliers", drop_outliers,
                    "also fit boxplot-filtered data and report RDs");

  auto* test_cmd = app.add_subcommand("test", "Wald-type test of a restriction");
  std::string hypothesis, pvalue_csv;
  test_cmd->add_option("--input", o.input)->required();
  test_cmd->add_option("--column", o.column)->required();
  test_cmd->add_option("--output", o.output)->required();
  test_cmd->add_option("--hypothesis", hypothesis,
                       "gamma=<v>, sigma=<v> or mu=<v>")->required();
  test_cmd->add_option("--pvalue-csv", pvalue_csv, "p-value-vs-alpha CSV path");
  add_alpha_option(test_cmd, o);

  auto* are_cmd = app.add_subcommand("are", "asymptotic relative efficiency table");
  std::vector<std::string> theta_specs;
  are_cmd->add_option("--output", o.output)->required();
  are_cmd->add_option("--theta", theta_specs, "distributions as mu,sigma,gamma");
  add_alpha_option(are_cmd, o);

  auto* power_cmd = app.add_subcommand("power", "asymptotic contiguous power table");
  std::string d_spec;
  double tau0 = 0.05, gamma0 = 0.0;
  power_cmd->add_option("--output", o.output)->required();
  power_cmd->add_option("--d", d_spec, "shift grid, comma list or lo:hi:step");
  power_cmd->add_option("--tau0", tau0, "significance level");
  power_cmd->add_option("--gamma0", gamma0, "null shape value");
  add_alpha_option(power_cmd, o);

  auto* diag_cmd = app.add_subcommand("diagnose", "influence-function curves");
  std::string kind = "estimator_if", theta_spec = "0,1,1", grid_spec = "-10:10:0.05";
  double d_shift = 4.0;
  diag_cmd->add_option("--output", o.output)->required();
  diag_cmd->add_option("--kind", kind, "estimator_if|test_if2|test_pif");
  diag_cmd->add_option("--theta", theta_spec, "evaluation point mu,sigma,gamma");
  diag_cmd->add_option("--grid", grid_spec, "contamination grid lo:hi:step");
  diag_cmd->add_option("--gamma0", gamma0, "restriction value for test IFs");
  diag_cmd->add_option("--d", d_shift, "contiguous shift for the PIF");
  diag_cmd->add_option("--tau0", tau0, "significance level for the PIF");
  add_alpha_option(diag_cmd, o);

  auto* sim_cmd = app.add_subcommand("simulate", "Monte Carlo studies");
  std::string design = "bias_mse", base_spec = "0,1,5", cont_spec = "10,1,5";
  std::string alt_spec = "0,1,1", alt_cont_spec = "0,1,-3";
  double epsilon = 0.0;
  int n = 100, reps = 500, threads = 0, max_iters = 3000;
  sim_cmd->add_option("--output", o.output)->required();
  sim_cmd->add_option("--design", design, "bias_mse|level_power");
  sim_cmd->add_option("--base", base_spec, "base distribution mu,sigma,gamma");
  sim_cmd->add_option("--contaminant", cont_spec, "contaminating distribution");
  sim_cmd->add_option("--alt", alt_spec, "alternative for level_power");
  sim_cmd->add_option("--alt-contaminant", alt_cont_spec,
                      "contaminant for the power arm");
  sim_cmd->add_option("--epsilon", epsilon, "contamination proportion");
  sim_cmd->add_option("--n", n, "sample size");
  sim_cmd->add_option("--reps", reps, "replications");
  sim_cmd->add_option("--gamma0", gamma0, "null shape for the symmetry test");
  sim_cmd->add_option("--tau0", tau0, "significance level");
  sim_cmd->add_option("--threads", threads, "worker threads (0 = hardware)");
  sim_cmd->add_option("--max-iters", max_iters, "optimizer iteration cap");
  sim_cmd->add_option("--format", o.format, "json|csv");
  add_alpha_option(sim_cmd, o);

  for (auto* c : {fit_cmd, test_cmd, are_cmd, power_cmd, diag_cmd, sim_cmd})
    c->add_option("--seed", o.seed, "RNG seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (fit_cmd->parsed()) return cmd_fit(o, drop_outliers);
    if (test_cmd->parsed()) return cmd_test(o, hypothesis, pvalue_csv);
    if (are_cmd->parsed()) return cmd_are(o, theta_specs);
    if (power_cmd->parsed()) return cmd_power(o, d_spec, tau0, gamma0);
    if (diag_cmd->parsed())
      return cmd_diagnose(o, kind, theta_spec, grid_spec, gamma0, d_shift, tau0);
    if (sim_cmd->parsed())
      return cmd_simulate(o, design, base_spec, cont_spec, alt_spec,
                          alt_cont_spec, epsilon, n, reps, gamma0, tau0, threads,
                          max_iters);
  } catch (const CLI::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitIo;
  } catch (const DataError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitIo;
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNumerical;
  }
  return kExitUsage;
}
