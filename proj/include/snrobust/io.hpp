#ifndef SNROBUST_IO_HPP
#define SNROBUST_IO_HPP

#include <string>
#include <vector>

#include "snrobust/asymptotics.hpp"
#include "snrobust/estimation.hpp"
#include "snrobust/hypothesis.hpp"
#include "snrobust/montecarlo.hpp"
#include "snrobust/robustness.hpp"
#include "snrobust/sample.hpp"

namespace snrobust {

// Numbers serialized with 12 significant digits everywhere.
std::string format_number(double v);

// Reads one numeric column from an RFC-4180-style CSV (header required,
// UTF-8). Non-numeric and empty cells are skipped; `skipped` reports the
// count. Throws IoError on missing file/column, DataError below 5 values.
Sample ingest_csv(const std::string& path, const std::string& column,
                  int* skipped = nullptr);

// CSV writers mirroring the paper-table layouts.
std::string are_table_csv(const AreTable& table);
std::string power_table_csv(const std::vector<double>& d_grid,
                            const std::vector<double>& alpha_grid,
                            const std::vector<std::vector<double>>& power);
std::string if_curve_csv(const std::vector<IfCurve>& curves);
std::string simulation_report_csv(const SimulationReport& report);

// JSON serializers (nlohmann via vendor header behind the .cpp).
std::string fit_result_json(const FitResult& fit);
std::string wald_result_json(const WaldTestResult& result);
std::string simulation_report_json(const SimulationReport& report);

std::string fit_report_json(const std::vector<FitResult>& fits,
                            const Sample& data);

struct DropOutlierReport {
  std::vector<FitResult> full_fits;
  std::vector<FitResult> clean_fits;
  std::vector<RelativeDifference> rds;
  std::vector<std::size_t> removed_indices;
};
std::string drop_outlier_report_json(const DropOutlierReport& report,
                                     const Sample& data);

std::string test_report_json(const std::vector<WaldTestResult>& results,
                             const Sample& data);
std::string pvalue_curve_csv(const std::vector<WaldTestResult>& results);

}  // namespace snrobust

#endif  // SNROBUST_IO_HPP
