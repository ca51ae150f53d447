#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

#include "doctest.h"
#include "snrobust/errors.hpp"
#include "snrobust/estimation.hpp"
#include "snrobust/io.hpp"
#include "snrobust/robustness.hpp"

using namespace snrobust;

namespace {

struct TempFile {
  std::string path;
  explicit TempFile(const std::string& content) {
    static int counter = 0;
    path = "/tmp/snrobust_io_test_" + std::to_string(counter++) + ".csv";
    std::ofstream out(path);
    out << content;
  }
  ~TempFile() { std::remove(path.c_str()); }
};

}  // namespace

TEST_CASE("format_number uses 12 significant digits") {
  CHECK(format_number(1.0) == "1");
  CHECK(format_number(0.5) == "0.5");
  CHECK(format_number(1.0 / 3.0) == "0.333333333333");
  CHECK(format_number(123456789.123456789) == "123456789.123");
}

TEST_CASE("ingest_csv column selection") {
  SUBCASE("second column in file order") {
    TempFile f("a,b\n1,10\n2,20\n3,30\n4,40\n5,50\n");
    const Sample s = ingest_csv(f.path, "b");
    CHECK(s.values == std::vector<double>{10, 20, 30, 40, 50});
    CHECK(s.source == f.path + ":b");
  }

  SUBCASE("blanks and non-numeric cells skipped with count") {
    std::ostringstream content;
    content << "x,y\n";
    for (int i = 0; i < 100; ++i) {
      if (i == 10 || i == 20 || i == 30)
        content << i << ",\n";
      else
        content << i << "," << i * 1.5 << "\n";
    }
    TempFile f(content.str());
    int skipped = 0;
    const Sample s = ingest_csv(f.path, "y", &skipped);
    CHECK(s.values.size() == 97);
    CHECK(skipped == 3);
  }

  SUBCASE("header-only file is a data error") {
    TempFile f("x,y\n");
    CHECK_THROWS_AS(ingest_csv(f.path, "y"), DataError);
  }

  SUBCASE("missing file and missing column are IO errors") {
    CHECK_THROWS_AS(ingest_csv("/nonexistent/nope.csv", "x"), IoError);
    TempFile f("a,b\n1,2\n");
    CHECK_THROWS_AS(ingest_csv(f.path, "zzz"), IoError);
  }

  SUBCASE("quoted fields parse") {
    TempFile f("\"name\",\"value\"\nr1,1\nr2,2\nr3,3\nr4,4\nr5,\"5\"\n");
    const Sample s = ingest_csv(f.path, "value");
    CHECK(s.values.size() == 5);
    CHECK(s.values.back() == 5.0);
  }
}

TEST_CASE("csv writers round-trip to 12 significant digits") {
  const Sample data = sample({0, 1, 2}, 120, 17);
  std::vector<WaldTestResult> results;
  for (double a : {0.0, 0.1, 0.3, 0.5, 0.7, 1.0})
    results.push_back(wald_test(data, a, HypothesisSpec::gamma_equals(0.0)));
  const std::string csv = pvalue_curve_csv(results);
  TempFile f(csv);
  const Sample back = ingest_csv(f.path, "p_value");
  REQUIRE(back.values.size() == results.size());
  for (std::size_t i = 0; i < results.size(); ++i) {
    const double orig = results[i].p_value;
    CHECK(std::abs(back.values[i] - orig) <= 1e-11 * std::max(1.0, std::abs(orig)));
  }
}

TEST_CASE("are table csv layout") {
  const AreTable t = are_table({{0, 1, 1}}, {0.0, 0.5});
  const std::string csv = are_table_csv(t);
  std::istringstream is(csv);
  std::string line;
  std::getline(is, line);
  CHECK(line == "distribution,parameter,alpha=0,alpha=0.5");
  int rows = 0;
  while (std::getline(is, line)) ++rows;
  CHECK(rows == 3);  // mu, sigma, gamma
}

TEST_CASE("fit report json carries the contract fields") {
  const Sample data = sample({0, 1, 2}, 150, 18);
  const FitResult f = fit(data, 0.5);
  const std::string js = fit_result_json(f);
  for (const char* key :
       {"alpha", "theta_hat", "std_errors", "objective_value", "gradient_norm",
        "iterations", "converged", "method", "sigma_matrix"})
    CHECK(js.find(key) != std::string::npos);
}

TEST_CASE("if curve csv shape") {
  std::vector<double> grid;
  for (double y = -2.0; y <= 2.0 + 1e-9; y += 0.5) grid.push_back(y);
  std::vector<IfCurve> curves;
  for (double a : {0.1, 0.5})
    curves.push_back(if_curve(IfKind::estimator_if, {0, 1, 1}, a, grid));
  const std::string csv = if_curve_csv(curves);
  std::istringstream is(csv);
  std::string header;
  std::getline(is, header);
  // y + 3 components x 2 curves
  CHECK(std::count(header.begin(), header.end(), ',') == 6);
  int rows = 0;
  std::string line;
  while (std::getline(is, line)) ++rows;
  CHECK(rows == 9);
}
