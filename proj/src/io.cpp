#include "snrobust/io.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "snrobust/errors.hpp"

namespace snrobust {

using nlohmann::json;

std::string format_number(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

namespace {

// All JSON numbers go through the same 12-significant-digit rounding as
// the CSV writers, keeping outputs diffable.
double r12(double v) {
  if (!std::isfinite(v)) return v;
  return std::strtod(format_number(v).c_str(), nullptr);
}

// Minimal RFC-4180 field splitter with quote handling.
std::vector<std::string> split_csv_row(const std::string& line) {
  std::vector<std::string> fields;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          cur += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        cur += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.push_back(cur);
      cur.clear();
    } else if (c != '\r') {
      cur += c;
    }
  }
  fields.push_back(cur);
  return fields;
}

std::string trim(const std::string& s) {
  std::size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}

json params_json(const SnParams& p) {
  return json{{"mu", r12(p.mu)}, {"sigma", r12(p.sigma)}, {"gamma", r12(p.gamma)}};
}

json fit_json_obj(const FitResult& f) {
  json j;
  j["alpha"] = r12(f.alpha);
  j["theta_hat"] = params_json(f.params);
  j["std_errors"] = {r12(f.std_errors[0]), r12(f.std_errors[1]), r12(f.std_errors[2])};
  j["objective_value"] = r12(f.objective_value);
  j["gradient_norm"] = r12(f.gradient_norm);
  j["iterations"] = f.iterations;
  j["converged"] = f.converged;
  j["method"] = to_string(f.method);
  j["covariance_well_conditioned"] = f.covariance_well_conditioned;
  if (!f.note.empty()) j["note"] = f.note;
  json sigma = json::array();
  for (int i = 0; i < 3; ++i)
    sigma.push_back({r12(f.covariance.sigma_matrix[i][0]),
                     r12(f.covariance.sigma_matrix[i][1]),
                     r12(f.covariance.sigma_matrix[i][2])});
  j["sigma_matrix"] = sigma;
  return j;
}

json wald_json_obj(const WaldTestResult& w) {
  json j;
  j["statistic"] = r12(w.statistic);
  j["df"] = w.df;
  j["p_value"] = r12(w.p_value);
  j["alpha"] = r12(w.alpha);
  j["theta_hat"] = params_json(w.fit.params);
  j["std_errors"] = {r12(w.fit.std_errors[0]), r12(w.fit.std_errors[1]), r12(w.fit.std_errors[2])};
  j["hypothesis"] = w.hypothesis;
  j["conditioning_warning"] = w.conditioning_warning;
  json rej = json::object();
  for (const auto& [tau, dec] : w.reject_at) rej[format_number(tau)] = dec;
  j["reject_at"] = rej;
  return j;
}

json sample_json_obj(const Sample& s) {
  return json{{"n", s.values.size()}, {"label", s.label}, {"source", s.source}};
}

json scheme_json(const ContaminationScheme& s) {
  return json{{"base", params_json(s.base)},
              {"contaminant", params_json(s.contaminant)},
              {"epsilon", r12(s.epsilon)}};
}

}  // namespace

Sample ingest_csv(const std::string& path, const std::string& column,
                  int* skipped) {
  std::ifstream in(path);
  if (!in) throw IoError("ingest_csv: cannot open " + path);
  std::string line;
  if (!std::getline(in, line)) throw IoError("ingest_csv: empty file " + path);

  const auto header = split_csv_row(line);
  std::size_t col = header.size();
  for (std::size_t i = 0; i < header.size(); ++i)
    if (trim(header[i]) == column) {
      col = i;
      break;
    }
  if (col == header.size())
    throw IoError("ingest_csv: column '" + column + "' not found in " + path);

  Sample out;
  out.label = column;
  out.source = path + ":" + column;
  int skip_count = 0;
  while (std::getline(in, line)) {
    if (trim(line).empty()) continue;
    const auto fields = split_csv_row(line);
    if (col >= fields.size()) {
      ++skip_count;
      continue;
    }
    const std::string cell = trim(fields[col]);
    if (cell.empty()) {
      ++skip_count;
      continue;
    }
    try {
      std::size_t pos = 0;
      const double v = std::stod(cell, &pos);
      if (pos != cell.size() || !std::isfinite(v)) {
        ++skip_count;
        continue;
      }
      out.values.push_back(v);
    } catch (const std::exception&) {
      ++skip_count;
    }
  }
  if (skipped) *skipped = skip_count;
  if (out.values.size() < 5)
    throw DataError("ingest_csv: fewer than 5 numeric values in column '" +
                    column + "'");
  return out;
}

std::string are_table_csv(const AreTable& table) {
  std::ostringstream os;
  os << "distribution,parameter";
  for (double a : table.alphas) os << ",alpha=" << format_number(a);
  os << "\n";
  static const char* const names[3] = {"mu", "sigma", "gamma"};
  for (std::size_t t = 0; t < table.thetas.size(); ++t) {
    const auto& th = table.thetas[t];
    const std::string dist = "SN(" + format_number(th.mu) + "," +
                             format_number(th.sigma) + "," +
                             format_number(th.gamma) + ")";
    for (int k = 0; k < 3; ++k) {
      os << dist << "," << names[k];
      for (double v : table.values[t][k]) os << "," << format_number(v);
      os << "\n";
    }
  }
  return os.str();
}

std::string power_table_csv(const std::vector<double>& d_grid,
                            const std::vector<double>& alpha_grid,
                            const std::vector<std::vector<double>>& power) {
  std::ostringstream os;
  os << "d";
  for (double a : alpha_grid) os << ",alpha=" << format_number(a);
  os << "\n";
  for (std::size_t i = 0; i < d_grid.size(); ++i) {
    os << format_number(d_grid[i]);
    for (double v : power[i]) os << "," << format_number(v);
    os << "\n";
  }
  return os.str();
}

std::string if_curve_csv(const std::vector<IfCurve>& curves) {
  if (curves.empty()) throw ConfigError("if_curve_csv: no curves");
  std::ostringstream os;
  os << "y";
  for (const auto& c : curves) {
    const std::string tag = "alpha=" + format_number(c.alpha);
    if (c.kind == IfKind::estimator_if)
      os << ",if_mu[" << tag << "],if_sigma[" << tag << "],if_gamma[" << tag << "]";
    else if (c.kind == IfKind::test_if2)
      os << ",if2[" << tag << "]";
    else
      os << ",pif[" << tag << "]";
  }
  os << "\n";
  const std::size_t npts = curves.front().grid.size();
  for (const auto& c : curves)
    if (c.grid != curves.front().grid)
      throw ConfigError("if_curve_csv: curves must share the grid");
  for (std::size_t i = 0; i < npts; ++i) {
    os << format_number(curves.front().grid[i]);
    for (const auto& c : curves)
      for (double v : c.values[i]) os << "," << format_number(v);
    os << "\n";
  }
  return os.str();
}

std::string simulation_report_csv(const SimulationReport& report) {
  std::ostringstream os;
  static const char* const names[3] = {"mu", "sigma", "gamma"};
  if (!report.bias_mse.empty()) {
    os << "alpha,parameter,bias,mse\n";
    for (std::size_t a = 0; a < report.alpha_grid.size(); ++a)
      for (int k = 0; k < 3; ++k)
        os << format_number(report.alpha_grid[a]) << "," << names[k] << ","
           << format_number(report.bias_mse[a][k].bias) << ","
           << format_number(report.bias_mse[a][k].mse) << "\n";
  } else {
    os << "alpha,level,power\n";
    for (std::size_t a = 0; a < report.alpha_grid.size(); ++a)
      os << format_number(report.alpha_grid[a]) << ","
         << format_number(report.level[a]) << ","
         << format_number(report.power[a]) << "\n";
  }
  return os.str();
}

std::string fit_result_json(const FitResult& fit) { return fit_json_obj(fit).dump(2); }

std::string wald_result_json(const WaldTestResult& result) {
  return wald_json_obj(result).dump(2);
}

std::string simulation_report_json(const SimulationReport& report) {
  json j;
  j["design"] = report.design;
  j["n"] = report.n;
  j["replications"] = report.replications;
  json ag = json::array();
  for (double v : report.alpha_grid) ag.push_back(r12(v));
  j["alpha_grid"] = ag;
  j["scheme"] = scheme_json(report.scheme);
  if (report.alt_scheme) j["alt_scheme"] = scheme_json(*report.alt_scheme);
  if (!report.bias_mse.empty()) {
    json rows = json::array();
    static const char* const names[3] = {"mu", "sigma", "gamma"};
    for (std::size_t a = 0; a < report.alpha_grid.size(); ++a) {
      json row;
      row["alpha"] = r12(report.alpha_grid[a]);
      for (int k = 0; k < 3; ++k)
        row[names[k]] = {{"bias", r12(report.bias_mse[a][k].bias)},
                         {"mse", r12(report.bias_mse[a][k].mse)}};
      rows.push_back(row);
    }
    j["bias_mse"] = rows;
  }
  if (!report.level.empty()) {
    json lv = json::array(), pw = json::array();
    for (double v : report.level) lv.push_back(r12(v));
    for (double v : report.power) pw.push_back(r12(v));
    j["level"] = lv;
    j["power"] = pw;
    j["gamma0"] = r12(report.gamma0);
    j["tau0"] = r12(report.tau0);
  }
  j["master_seed"] = report.master_seed;
  j["failures"] = report.failures;
  j["nonconverged"] = report.nonconverged;
  j["failure_warning"] = report.failure_warning;
  j["runtime_seconds"] = r12(report.runtime_seconds);
  return j.dump(2);
}

std::string fit_report_json(const std::vector<FitResult>& fits,
                            const Sample& data) {
  json j;
  j["data"] = sample_json_obj(data);
  json arr = json::array();
  for (const auto& f : fits) arr.push_back(fit_json_obj(f));
  j["fits"] = arr;
  return j.dump(2);
}

std::string drop_outlier_report_json(const DropOutlierReport& report,
                                     const Sample& data) {
  json j;
  j["data"] = sample_json_obj(data);
  j["removed_indices"] = report.removed_indices;
  json full = json::array(), clean = json::array(), rds = json::array();
  for (const auto& f : report.full_fits) full.push_back(fit_json_obj(f));
  for (const auto& f : report.clean_fits) clean.push_back(fit_json_obj(f));
  for (std::size_t i = 0; i < report.rds.size(); ++i) {
    const auto& rd = report.rds[i];
    json r;
    r["alpha"] = r12(report.full_fits[i].alpha);
    r["rd_percent"] = {r12(rd.percent[0]), r12(rd.percent[1]), r12(rd.percent[2])};
    r["flagged"] = {rd.flagged[0], rd.flagged[1], rd.flagged[2]};
    rds.push_back(r);
  }
  j["full_fits"] = full;
  j["clean_fits"] = clean;
  j["relative_differences"] = rds;
  return j.dump(2);
}

std::string test_report_json(const std::vector<WaldTestResult>& results,
                             const Sample& data) {
  json j;
  j["data"] = sample_json_obj(data);
  json arr = json::array();
  for (const auto& w : results) arr.push_back(wald_json_obj(w));
  j["tests"] = arr;
  return j.dump(2);
}

std::string pvalue_curve_csv(const std::vector<WaldTestResult>& results) {
  std::ostringstream os;
  os << "alpha,statistic,p_value\n";
  for (const auto& w : results)
    os << format_number(w.alpha) << "," << format_number(w.statistic) << ","
       << format_number(w.p_value) << "\n";
  return os.str();
}

}  // namespace snrobust
