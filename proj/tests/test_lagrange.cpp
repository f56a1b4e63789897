#include <doctest.h>

#include <cmath>

#include "ceqopt/lagrange.hpp"
#include "helpers.hpp"

using namespace ceqopt;
using testutil::box_cfg;
using testutil::example_1a;
using testutil::example_1b;
using testutil::example_2;

TEST_CASE("lagrangian system of example 1a over (x, y, lambda)") {
  Problem p = example_1a();
  std::vector<Expr> system = lagrangian_system(p);
  REQUIRE(system.size() == 3);
  std::vector<std::string> ext = {"x", "y", "lambda"};
  CHECK(testutil::numerically_equal(system[0], parse("2*x - lambda", ext), 3));
  CHECK(testutil::numerically_equal(system[1], parse("4*y + 2*lambda*y", ext), 3));
  CHECK(testutil::numerically_equal(system[2], parse("x - y^2 - 1", ext), 3));
}

TEST_CASE("lagrange solver on example 1a recovers the multiplier") {
  std::vector<LagrangePoint> pts = find_stationary_lagrange(example_1a(), box_cfg(2));
  REQUIRE(pts.size() == 1);
  CHECK(testutil::max_dist(pts[0].point, {1.0, 0.0}) <= 1e-8);
  // under grad f = lambda grad g, the first equation 2x - lambda = 0 at x = 1
  // fixes lambda = 2
  REQUIRE(pts[0].multipliers.size() == 1);
  CHECK(pts[0].multipliers[0] == doctest::Approx(2.0).epsilon(1e-8));
}

TEST_CASE("lagrange solver on example 1b") {
  std::vector<LagrangePoint> pts = find_stationary_lagrange(example_1b(), box_cfg(2));
  REQUIRE(pts.size() == 3);
  const double iy = 1.0 / std::sqrt(3.0);
  CHECK(testutil::max_dist(pts[0].point, {2.0 / 3.0, -iy}) <= 1e-8);
  CHECK(testutil::max_dist(pts[1].point, {2.0 / 3.0, iy}) <= 1e-8);
  CHECK(testutil::max_dist(pts[2].point, {1.0, 0.0}) <= 1e-8);
}

TEST_CASE("lagrange solver on example 2 finds the four real optima") {
  std::vector<LagrangePoint> pts = find_stationary_lagrange(example_2(), box_cfg(3));
  testutil::Example2Truth truth;
  REQUIRE(pts.size() == 4);
  CHECK(testutil::max_dist(pts[0].point, truth.c) <= 1e-8);
  CHECK(testutil::max_dist(pts[1].point, truth.b) <= 1e-8);
  CHECK(testutil::max_dist(pts[2].point, truth.a) <= 1e-8);
  CHECK(testutil::max_dist(pts[3].point, truth.d) <= 1e-8);
}

TEST_CASE("an inconsistent multiplier system has no roots") {
  Problem p;
  p.variables = {"x", "y"};
  p.objective = parse("x + y", p.variables);
  p.constraints.push_back({parse("x - y", p.variables), 0.0});
  // {1 - lambda, 1 + lambda, x - y}: lambda cannot be both 1 and -1
  CHECK(find_stationary_lagrange(p, box_cfg(2)).empty());
}

TEST_CASE("cross validation matches the two root sets") {
  SUBCASE("example 1b: 3 matched, none unmatched") {
    Problem p = example_1b();
    StationaryResult det = find_stationary(p, box_cfg(2));
    std::vector<LagrangePoint> lag = find_stationary_lagrange(p, box_cfg(2));
    MatchReport r = cross_validate(p, det.points, lag, 1e-7);
    CHECK(r.matched.size() == 3);
    CHECK(r.fully_matched());
    for (const auto& m : r.matched) CHECK(m.distance <= 1e-7);
  }
  SUBCASE("example 2: 4 matched, none unmatched") {
    Problem p = example_2();
    StationaryResult det = find_stationary(p, box_cfg(3));
    std::vector<LagrangePoint> lag = find_stationary_lagrange(p, box_cfg(3));
    MatchReport r = cross_validate(p, det.points, lag, 1e-7);
    CHECK(r.matched.size() == 4);
    CHECK(r.fully_matched());
  }
  SUBCASE("empty vs empty is a trivial full match") {
    Problem p = example_1a();
    MatchReport r = cross_validate(p, {}, {}, 1e-7);
    CHECK(r.matched.empty());
    CHECK(r.fully_matched());
  }
  SUBCASE("a det-only point is reported with its least-squares residual") {
    Problem p = example_1a();
    StationaryResult det = find_stationary(p, box_cfg(2));
    MatchReport r = cross_validate(p, det.points, {}, 1e-7);
    REQUIRE(r.det_only.size() == 1);
    REQUIRE(r.det_only_multiplier_residuals.size() == 1);
    CHECK(r.det_only_multiplier_residuals[0] <= 1e-7);  // it is genuinely stationary
  }
}

TEST_CASE("multiplier recovery at matched points") {
  for (const Problem& p : {example_1a(), example_1b(), example_2()}) {
    const int n = p.dimension();
    std::vector<LagrangePoint> lag = find_stationary_lagrange(p, box_cfg(n));
    for (const LagrangePoint& lp : lag) {
      // || grad f - sum lambda_k grad g_k || with the solver's multipliers
      double norm2 = 0.0;
      for (int j = 0; j < n; ++j) {
        double r = evaluate(differentiate(p.objective, j), lp.point);
        for (int k = 0; k < n - 1; ++k)
          r -= lp.multipliers[static_cast<std::size_t>(k)] *
               evaluate(differentiate(p.constraints[static_cast<std::size_t>(k)].g, j),
                        lp.point);
        norm2 += r * r;
      }
      CHECK(std::sqrt(norm2) <= 1e-7);
    }
  }
}

TEST_CASE("benchmark runs both pipelines") {
  SUBCASE("example 1a: both methods find the single optimum") {
    BenchmarkReport r = benchmark_methods(example_1a(), box_cfg(2), 3);
    CHECK_FALSE(r.degenerate);
    CHECK(r.determinant_method.roots_found == 1);
    CHECK(r.lagrange_method.roots_found == 1);
    CHECK(r.root_sets_match);
    CHECK(r.determinant_method.median_ms >= 0.0);
    CHECK(r.determinant_method.total_newton_iterations > 0);
    CHECK(r.determinant_method.starts == 7 * 7 + 50);
  }
  SUBCASE("example 2: both methods find four optima") {
    SolverConfig cfg = box_cfg(3);
    cfg.grid_per_axis = 5;
    cfg.extra_random_starts = 20;
    BenchmarkReport r = benchmark_methods(example_2(), cfg, 2);
    CHECK(r.determinant_method.roots_found == 4);
    CHECK(r.lagrange_method.roots_found == 4);
    CHECK(r.root_sets_match);
  }
  SUBCASE("dependent constraints report the degeneracy") {
    Problem p;
    p.variables = {"x", "y", "z"};
    p.objective = parse("x + y", p.variables);
    p.constraints.push_back({parse("x + y", p.variables), 1.0});
    p.constraints.push_back({parse("2*x + 2*y", p.variables), 2.0});
    BenchmarkReport r = benchmark_methods(p, box_cfg(3), 2);
    CHECK(r.degenerate);
    CHECK(r.determinant_method.roots_found == 0);
    CHECK(r.lagrange_method.roots_found == 0);
  }
}
