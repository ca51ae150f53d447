#include <algorithm>
#include <cmath>

#include "doctest.h"
#include "snrobust/errors.hpp"
#include "snrobust/montecarlo.hpp"

using namespace snrobust;

TEST_CASE("contaminated_sample composition") {
  SUBCASE("epsilon = 0 is a pure base sample") {
    const ContaminationScheme s{{0, 1, 5}, {10, 1, 5}, 0.0};
    const Sample d = contaminated_sample(s, 50, 1);
    CHECK(d.values.size() == 50);
    for (double v : d.values) CHECK(v < 9.0);
  }

  SUBCASE("floor arithmetic places exactly 10 contaminants") {
    const ContaminationScheme s{{0, 1, 5}, {100, 0.01, 0}, 0.1};
    const Sample d = contaminated_sample(s, 100, 2);
    const long far = std::count_if(d.values.begin(), d.values.end(),
                                   [](double v) { return v > 50.0; });
    CHECK(far == 10);
  }

  SUBCASE("mixture mean is bracketed by the component means") {
    const ContaminationScheme s{{0, 1, 5}, {10, 1, 5}, 0.1};
    const Sample d = contaminated_sample(s, 10000, 3);
    const double m = d.mean();
    CHECK(m > moments({0, 1, 5}).mean);
    CHECK(m < moments({10, 1, 5}).mean);
  }

  SUBCASE("deterministic per seed") {
    const ContaminationScheme s{{0, 1, 5}, {10, 1, 5}, 0.1};
    CHECK(contaminated_sample(s, 100, 9).values ==
          contaminated_sample(s, 100, 9).values);
    CHECK(contaminated_sample(s, 100, 9).values !=
          contaminated_sample(s, 100, 10).values);
  }

  SUBCASE("epsilon bounds") {
    CHECK_THROWS_AS((ContaminationScheme{{0, 1, 0}, {0, 1, 0}, 0.5}).validate(),
                    ConfigError);
  }
}

TEST_CASE("bias_mse_study smoke run and invariants") {
  const ContaminationScheme s{{0, 1, 5}, {10, 1, 5}, 0.1};
  GdConfig cfg;
  cfg.max_iters = 2000;
  const auto rep = bias_mse_study(s, 60, 10, {0.1, 0.5}, cfg, 99, 2);

  CHECK(rep.replications == 10);
  CHECK(rep.bias_mse.size() == 2);
  for (std::size_t a = 0; a < 2; ++a)
    for (int k = 0; k < 3; ++k) {
      const auto& cell = rep.bias_mse[a][k];
      CHECK(std::isfinite(cell.bias));
      // Jensen: mse >= bias^2
      CHECK(cell.mse >= cell.bias * cell.bias - 1e-12);
    }
  CHECK(rep.runtime_seconds > 0.0);

  SUBCASE("sequential runs reproduce parallel runs bit-for-bit") {
    const auto seq = bias_mse_study(s, 60, 10, {0.1, 0.5}, cfg, 99, 1);
    for (std::size_t a = 0; a < 2; ++a)
      for (int k = 0; k < 3; ++k) {
        CHECK(seq.bias_mse[a][k].bias == rep.bias_mse[a][k].bias);
        CHECK(seq.bias_mse[a][k].mse == rep.bias_mse[a][k].mse);
      }
  }

  CHECK_THROWS_AS(bias_mse_study(s, 60, 1, {0.5}, cfg, 99), ConfigError);
}

TEST_CASE("level_power_study smoke run") {
  const ContaminationScheme null_s{{0, 1, 0}, {0, 1, 3}, 0.0};
  const ContaminationScheme alt_s{{0, 1, 1}, {0, 1, -3}, 0.0};
  GdConfig cfg;
  cfg.max_iters = 2000;
  const auto rep = level_power_study(null_s, alt_s, 60, 10, {0.5}, 0.0, 0.05, cfg, 7, 2);
  CHECK(rep.level.size() == 1);
  CHECK(rep.power.size() == 1);
  CHECK(rep.level[0] >= 0.0);
  CHECK(rep.level[0] <= 1.0);
  CHECK(rep.power[0] >= 0.0);
  CHECK(rep.power[0] <= 1.0);
  CHECK(rep.alt_scheme.has_value());
}

TEST_CASE("relative_difference") {
  FitResult full, clean;
  full.alpha = clean.alpha = 0.5;

  SUBCASE("identical fits give zero") {
    full.params = clean.params = {1, 2, 3};
    const auto rd = relative_difference(full, clean);
    for (int k = 0; k < 3; ++k) {
      CHECK(rd.percent[k] == 0.0);
      CHECK_FALSE(rd.flagged[k]);
    }
  }

  SUBCASE("arithmetic") {
    full.params = {2, 2, 2};
    clean.params = {1, 1, 1};
    const auto rd = relative_difference(full, clean);
    for (int k = 0; k < 3; ++k) CHECK(rd.percent[k] == doctest::Approx(50.0));
  }

  SUBCASE("division guard flags tiny denominators") {
    full.params = {1e-12, 1, 1};
    clean.params = {1, 1, 1};
    const auto rd = relative_difference(full, clean);
    CHECK(rd.flagged[0]);
    CHECK_FALSE(rd.flagged[1]);
  }

  SUBCASE("alpha mismatch rejected") {
    clean.alpha = 0.3;
    CHECK_THROWS_AS(relative_difference(full, clean), ParameterError);
  }
}

TEST_CASE("outlier_filter_boxplot") {
  SUBCASE("no fence crossers, unchanged") {
    Sample d{{1, 2, 3, 4, 5, 6, 7, 8}, "", ""};
    const auto res = outlier_filter_boxplot(d);
    CHECK(res.kept.values == d.values);
    CHECK(res.removed_indices.empty());
  }

  SUBCASE("gross outlier removed") {
    Sample d{{}, "", ""};
    for (int i = 0; i < 20; ++i) d.values.push_back(0.01 * i);
    d.values.push_back(100.0);
    const auto res = outlier_filter_boxplot(d);
    CHECK(res.removed_indices.size() == 1);
    CHECK(res.removed_indices[0] == 20);
    CHECK(res.kept.values.size() == 20);
  }

  SUBCASE("normal-theory fence rate near 0.7 percent") {
    const Sample d = sample({0, 1, 0}, 10000, 321);
    const auto res = outlier_filter_boxplot(d);
    const double rate = 100.0 * static_cast<double>(res.removed_indices.size()) /
                        static_cast<double>(d.values.size());
    CHECK(rate > 0.3);
    CHECK(rate < 1.1);
  }

  SUBCASE("too-small samples rejected") {
    Sample d{{1, 2, 3, 4}, "", ""};
    CHECK_THROWS_AS(outlier_filter_boxplot(d), DataError);
  }
}

TEST_CASE("type-7 quantiles") {
  std::vector<double> v{1, 2, 3, 4};
  CHECK(quantile_type7(v, 0.25) == doctest::Approx(1.75));
  CHECK(quantile_type7(v, 0.5) == doctest::Approx(2.5));
  CHECK(quantile_type7(v, 0.75) == doctest::Approx(3.25));
  CHECK(quantile_type7(v, 0.0) == 1.0);
  CHECK(quantile_type7(v, 1.0) == 4.0);
}

TEST_CASE("rd robustness trend on a seeded contaminated instance") {
  // full vs boxplot-cleaned fits: the alpha=0.5 pair should move less
  // than the MLE pair, componentwise on mu and sigma
  Sample data = sample({0, 1, 5}, 190, 555);
  const Sample bad = sample({10, 1, 5}, 10, 556);
  data.values.insert(data.values.end(), bad.values.begin(), bad.values.end());
  const auto filtered = outlier_filter_boxplot(data);

  const FitResult full0 = fit(data, 0.0);
  const FitResult clean0 = fit(filtered.kept, 0.0);
  const FitResult full5 = fit(data, 0.5);
  const FitResult clean5 = fit(filtered.kept, 0.5);

  const auto rd0 = relative_difference(full0, clean0);
  const auto rd5 = relative_difference(full5, clean5);
  CHECK(rd5.percent[0] < rd0.percent[0]);
  CHECK(rd5.percent[1] < rd0.percent[1]);
}
