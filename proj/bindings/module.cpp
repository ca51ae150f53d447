#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "snrobust/asymptotics.hpp"
#include "snrobust/dpd.hpp"
#include "snrobust/estimation.hpp"
#include "snrobust/hypothesis.hpp"
#include "snrobust/io.hpp"
#include "snrobust/montecarlo.hpp"
#include "snrobust/robustness.hpp"
#include "snrobust/skew_normal.hpp"
#include "snrobust/special_functions.hpp"

namespace py = pybind11;
using namespace snrobust;

namespace {

Sample make_sample(const std::vector<double>& values) {
  Sample s;
  s.values = values;
  s.label = "python";
  s.source = "python";
  return s;
}

py::dict mat_to_list(const Mat3& m) {
  py::dict d;
  py::list rows;
  for (int i = 0; i < 3; ++i) {
    py::list row;
    for (int j = 0; j < 3; ++j) row.append(m[i][j]);
    rows.append(row);
  }
  d["rows"] = rows;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Robust minimum density power divergence inference for the "
            "three-parameter skew-normal model";

  py::register_exception<ParameterError>(m, "ParameterError", PyExc_ValueError);
  py::register_exception<DataError>(m, "DataError", PyExc_ValueError);
  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<IntegrationError>(m, "IntegrationError",
                                           PyExc_ArithmeticError);
  py::register_exception<ConditioningError>(m, "ConditioningError",
                                            PyExc_ArithmeticError);
  py::register_exception<NumericalError>(m, "NumericalError",
                                         PyExc_ArithmeticError);

  py::class_<SnParams>(m, "SnParams")
      .def(py::init<double, double, double>(), py::arg("mu") = 0.0,
           py::arg("sigma") = 1.0, py::arg("gamma") = 0.0)
      .def_readwrite("mu", &SnParams::mu)
      .def_readwrite("sigma", &SnParams::sigma)
      .def_readwrite("gamma", &SnParams::gamma)
      .def("delta", &SnParams::delta)
      .def("__repr__", [](const SnParams& p) {
        return "SnParams(mu=" + format_number(p.mu) +
               ", sigma=" + format_number(p.sigma) +
               ", gamma=" + format_number(p.gamma) + ")";
      });

  py::class_<SnMoments>(m, "SnMoments")
      .def_readonly("mean", &SnMoments::mean)
      .def_readonly("variance", &SnMoments::variance)
      .def_readonly("skewness", &SnMoments::skewness)
      .def_readonly("delta", &SnMoments::delta);

  // scalar special functions
  m.def("std_normal_pdf", &std_normal_pdf, py::arg("z"));
  m.def("std_normal_cdf", &std_normal_cdf, py::arg("z"));
  m.def("owens_t",
        [](double h, double a) { return owens_t(h, a); }, py::arg("h"),
        py::arg("a"));
  m.def("mills_ratio", &mills_ratio, py::arg("z"));

  // skew-normal model
  m.def("pdf", &pdf, py::arg("theta"), py::arg("x"));
  m.def("log_pdf", &log_pdf, py::arg("theta"), py::arg("x"));
  m.def("cdf", [](const SnParams& t, double x) { return cdf(t, x); },
        py::arg("theta"), py::arg("x"));
  m.def("score", &score, py::arg("theta"), py::arg("x"));
  m.def("moments", &moments, py::arg("theta"));
  m.def("sample",
        [](const SnParams& t, int n, std::uint64_t seed) {
          return sample(t, n, seed).values;
        },
        py::arg("theta"), py::arg("n"), py::arg("seed"));

  // DPD machinery
  m.def("power_integral",
        [](const SnParams& t, double beta) { return power_integral(t, beta); },
        py::arg("theta"), py::arg("beta"));
  m.def("xi", [](const SnParams& t, double a) { return xi(t, a); },
        py::arg("theta"), py::arg("alpha"));
  m.def("objective",
        [](const SnParams& t, const std::vector<double>& xs, double a) {
          DpdConfig cfg;
          cfg.alpha = a;
          return objective(t, make_sample(xs), cfg);
        },
        py::arg("theta"), py::arg("data"), py::arg("alpha"));
  m.def("objective_gradient",
        [](const SnParams& t, const std::vector<double>& xs, double a) {
          DpdConfig cfg;
          cfg.alpha = a;
          return objective_gradient(t, make_sample(xs), cfg);
        },
        py::arg("theta"), py::arg("data"), py::arg("alpha"));

  // asymptotics
  m.def("n_integral",
        [](const SnParams& t, double a, int i, int j) {
          return n_integral(t, a, i, j);
        },
        py::arg("theta"), py::arg("alpha"), py::arg("i"), py::arg("j"));
  m.def("covariance",
        [](const SnParams& t, double a) {
          const auto c = covariance(t, a);
          py::dict d;
          d["j"] = mat_to_list(c.j_matrix);
          d["k"] = mat_to_list(c.k_matrix);
          d["sigma"] = mat_to_list(c.sigma_matrix);
          d["alpha"] = c.alpha;
          return d;
        },
        py::arg("theta"), py::arg("alpha"));
  m.def("are_table",
        [](const std::vector<SnParams>& thetas, const std::vector<double>& alphas) {
          const AreTable t = are_table(thetas, alphas);
          py::list out;
          for (std::size_t d = 0; d < t.thetas.size(); ++d) {
            py::dict row;
            row["theta"] = t.thetas[d];
            row["limit_evaluated"] = static_cast<bool>(t.limit_evaluated[d]);
            row["mu"] = t.values[d][0];
            row["sigma"] = t.values[d][1];
            row["gamma"] = t.values[d][2];
            out.append(row);
          }
          return out;
        },
        py::arg("thetas"), py::arg("alphas"));

  // estimation
  py::class_<GdConfig>(m, "GdConfig")
      .def(py::init<>())
      .def_readwrite("step_size", &GdConfig::step_size)
      .def_readwrite("max_iters", &GdConfig::max_iters)
      .def_readwrite("rel_obj_tol", &GdConfig::rel_obj_tol)
      .def_readwrite("grad_tol", &GdConfig::grad_tol);

  py::class_<GaConfig>(m, "GaConfig")
      .def(py::init<>())
      .def_readwrite("population", &GaConfig::population)
      .def_readwrite("elites", &GaConfig::elites)
      .def_readwrite("crossover_prob", &GaConfig::crossover_prob)
      .def_readwrite("mutation_prob", &GaConfig::mutation_prob)
      .def_readwrite("max_generations", &GaConfig::max_generations)
      .def_readwrite("stall_generations", &GaConfig::stall_generations)
      .def_readwrite("rng_seed", &GaConfig::rng_seed);

  py::class_<FitResult>(m, "FitResult")
      .def_readonly("params", &FitResult::params)
      .def_readonly("alpha", &FitResult::alpha)
      .def_readonly("std_errors", &FitResult::std_errors)
      .def_readonly("objective_value", &FitResult::objective_value)
      .def_readonly("gradient_norm", &FitResult::gradient_norm)
      .def_readonly("iterations", &FitResult::iterations)
      .def_readonly("converged", &FitResult::converged)
      .def_readonly("note", &FitResult::note)
      .def_property_readonly(
          "method", [](const FitResult& f) { return std::string(to_string(f.method)); })
      .def("__repr__", [](const FitResult& f) {
        return "FitResult(alpha=" + format_number(f.alpha) + ", mu=" +
               format_number(f.params.mu) + ", sigma=" +
               format_number(f.params.sigma) + ", gamma=" +
               format_number(f.params.gamma) + ")";
      });

  m.def("default_init",
        [](const std::vector<double>& xs) { return default_init(make_sample(xs)); },
        py::arg("data"));
  m.def("fit",
        [](const std::vector<double>& xs, double a, const GdConfig& cfg,
           std::optional<SnParams> init) {
          return fit(make_sample(xs), a, cfg, init);
        },
        py::arg("data"), py::arg("alpha"), py::arg("config") = GdConfig{},
        py::arg("init") = std::nullopt,
        "MDPDE fit by gradient descent (alpha = 0 runs the MLE)");
  m.def("fit_gd",
        [](const std::vector<double>& xs, double a, const GdConfig& cfg,
           std::optional<SnParams> init) {
          return fit_gd(make_sample(xs), a, cfg, init);
        },
        py::arg("data"), py::arg("alpha"), py::arg("config") = GdConfig{},
        py::arg("init") = std::nullopt);
  m.def("fit_mle",
        [](const std::vector<double>& xs, const GdConfig& cfg,
           std::optional<SnParams> init) {
          return fit_mle(make_sample(xs), cfg, init);
        },
        py::arg("data"), py::arg("config") = GdConfig{},
        py::arg("init") = std::nullopt);
  m.def("fit_ga",
        [](const std::vector<double>& xs, double a, const GaConfig& cfg) {
          return fit_ga(make_sample(xs), a, cfg);
        },
        py::arg("data"), py::arg("alpha"), py::arg("config") = GaConfig{});

  // robustness diagnostics
  m.def("estimator_if",
        [](double y, const SnParams& t, double a) { return estimator_if(y, t, a); },
        py::arg("y"), py::arg("theta"), py::arg("alpha"));
  m.def("if_curve",
        [](const SnParams& t, double a, const std::vector<double>& grid) {
          const IfCurve c = if_curve(IfKind::estimator_if, t, a, grid);
          return c.values;
        },
        py::arg("theta"), py::arg("alpha"), py::arg("grid"),
        "estimator influence function over a contamination grid");

  // hypothesis tests
  py::class_<WaldTestResult>(m, "WaldTestResult")
      .def_readonly("statistic", &WaldTestResult::statistic)
      .def_readonly("df", &WaldTestResult::df)
      .def_readonly("p_value", &WaldTestResult::p_value)
      .def_readonly("alpha", &WaldTestResult::alpha)
      .def_readonly("fit", &WaldTestResult::fit)
      .def_readonly("hypothesis", &WaldTestResult::hypothesis)
      .def_readonly("conditioning_warning", &WaldTestResult::conditioning_warning);

  m.def("symmetry_test",
        [](const std::vector<double>& xs, double a, double gamma0,
           const GdConfig& cfg) {
          return symmetry_test(make_sample(xs), a, gamma0, cfg);
        },
        py::arg("data"), py::arg("alpha"), py::arg("gamma0") = 0.0,
        py::arg("config") = GdConfig{});
  m.def("wald_test",
        [](const std::vector<double>& xs, double a, const std::string& hyp,
           const GdConfig& cfg) {
          double v;
          HypothesisSpec h;
          if (std::sscanf(hyp.c_str(), "gamma=%lf", &v) == 1)
            h = HypothesisSpec::gamma_equals(v);
          else if (std::sscanf(hyp.c_str(), "sigma=%lf", &v) == 1)
            h = HypothesisSpec::sigma_equals(v);
          else if (std::sscanf(hyp.c_str(), "mu=%lf", &v) == 1)
            h = HypothesisSpec::mu_equals(v);
          else
            throw ConfigError("hypothesis must be gamma=<v>, sigma=<v> or mu=<v>");
          return wald_test(make_sample(xs), a, h, cfg);
        },
        py::arg("data"), py::arg("alpha"), py::arg("hypothesis"),
        py::arg("config") = GdConfig{});
  m.def("contiguous_power",
        [](const SnParams& theta0, double a, double gamma0, double d, double tau0) {
          return contiguous_power(theta0, a, HypothesisSpec::gamma_equals(gamma0),
                                  {0, 0, d}, tau0);
        },
        py::arg("theta0"), py::arg("alpha"), py::arg("gamma0"), py::arg("d"),
        py::arg("tau0") = 0.05);
  m.def("noncentral_chisq_sf", &noncentral_chisq_sf, py::arg("x"), py::arg("df"),
        py::arg("noncentrality"));
  m.def("chisq_sf", &chisq_sf, py::arg("x"), py::arg("df"));
  m.def("chisq_quantile", &chisq_quantile, py::arg("p"), py::arg("df"));

  // monte carlo harness
  py::class_<ContaminationScheme>(m, "ContaminationScheme")
      .def(py::init([](const SnParams& base, const SnParams& cont, double eps) {
             return ContaminationScheme{base, cont, eps};
           }),
           py::arg("base"), py::arg("contaminant"), py::arg("epsilon"))
      .def_readwrite("base", &ContaminationScheme::base)
      .def_readwrite("contaminant", &ContaminationScheme::contaminant)
      .def_readwrite("epsilon", &ContaminationScheme::epsilon);

  m.def("contaminated_sample",
        [](const ContaminationScheme& s, int n, std::uint64_t seed) {
          return contaminated_sample(s, n, seed).values;
        },
        py::arg("scheme"), py::arg("n"), py::arg("seed"));
  m.def("bias_mse_study",
        [](const ContaminationScheme& s, int n, int reps,
           const std::vector<double>& alphas, std::uint64_t seed, int threads,
           int max_iters) {
          GdConfig cfg;
          cfg.max_iters = max_iters;
          const auto rep = bias_mse_study(s, n, reps, alphas, cfg, seed, threads);
          py::dict d;
          d["alpha_grid"] = rep.alpha_grid;
          py::list rows;
          for (const auto& r : rep.bias_mse) {
            py::dict row;
            row["bias"] = py::make_tuple(r[0].bias, r[1].bias, r[2].bias);
            row["mse"] = py::make_tuple(r[0].mse, r[1].mse, r[2].mse);
            rows.append(row);
          }
          d["cells"] = rows;
          d["failures"] = rep.failures;
          d["runtime_seconds"] = rep.runtime_seconds;
          return d;
        },
        py::arg("scheme"), py::arg("n"), py::arg("reps"), py::arg("alphas"),
        py::arg("seed"), py::arg("threads") = 0, py::arg("max_iters") = 3000);
  m.def("outlier_filter_boxplot",
        [](const std::vector<double>& xs) {
          const auto res = outlier_filter_boxplot(make_sample(xs));
          return py::make_tuple(res.kept.values, res.removed_indices);
        },
        py::arg("data"), "returns (kept_values, removed_indices)");
}
