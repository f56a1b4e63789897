#include <doctest.h>

#include <cmath>

#include "ceqopt/solver.hpp"
#include "ceqopt/stationary.hpp"
#include "helpers.hpp"

using namespace ceqopt;
using testutil::box_cfg;

TEST_CASE("newton converges on a 1D quadratic") {
  std::vector<Expr> system = {parse("x^2 - 1", {"x"})};
  ExprMatrix jac = system_jacobian(system, 1);
  NewtonResult r = newton_solve(system, jac, {2.0}, box_cfg(1));
  REQUIRE(r.ok());
  CHECK(r.root->point[0] == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(r.root->residual_norm <= 1e-10);
}

TEST_CASE("newton is exact in one step on linear systems") {
  std::vector<std::string> vars = {"x", "y"};
  std::vector<Expr> system = {parse("x + y - 2", vars), parse("x - y", vars)};
  ExprMatrix jac = system_jacobian(system, 2);
  NewtonResult r = newton_solve(system, jac, {-2.5, 1.75}, box_cfg(2));
  REQUIRE(r.ok());
  CHECK(r.root->point[0] == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(r.root->point[1] == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(r.root->iterations == 1);
}

TEST_CASE("newton solves the example 1a stationarity system") {
  std::vector<std::string> vars = {"x", "y"};
  std::vector<Expr> system = {parse("-4*x*y - 4*y", vars), parse("x - y^2 - 1", vars)};
  ExprMatrix jac = system_jacobian(system, 2);
  NewtonResult r = newton_solve(system, jac, {2.0, 0.5}, box_cfg(2));
  REQUIRE(r.ok());
  CHECK(r.root->point[0] == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(std::abs(r.root->point[1]) <= 1e-9);
}

TEST_CASE("newton failure reasons") {
  SUBCASE("domain error at the start point") {
    std::vector<Expr> system = {parse("log(x)", {"x"})};
    NewtonResult r = newton_solve(system, system_jacobian(system, 1), {-1.0}, box_cfg(1));
    CHECK(!r.ok());
    CHECK(r.reason == NewtonFailureReason::DomainError);
  }
  SUBCASE("singular jacobian") {
    // at x = 0 the residual is 1 but the derivative vanishes
    std::vector<Expr> system = {parse("x^2 + 1", {"x"})};
    NewtonResult r = newton_solve(system, system_jacobian(system, 1), {0.0}, box_cfg(1));
    CHECK(!r.ok());
    CHECK(r.reason == NewtonFailureReason::SingularJacobian);
  }
  SUBCASE("diverged out of the search box") {
    std::vector<Expr> system = {parse("x - 1000000", {"x"})};
    NewtonResult r = newton_solve(system, system_jacobian(system, 1), {0.0}, box_cfg(1));
    CHECK(!r.ok());
    CHECK(r.reason == NewtonFailureReason::DivergedOutOfBox);
  }
  SUBCASE("no real root") {
    std::vector<Expr> system = {parse("x^2 + 1", {"x"})};
    NewtonResult r = newton_solve(system, system_jacobian(system, 1), {0.7}, box_cfg(1));
    CHECK(!r.ok());
  }
}

TEST_CASE("multistart finds all three roots of example 1b") {
  Problem p = testutil::example_1b();
  std::vector<Expr> system = stationary_system(p);
  std::vector<Root> roots = multistart_solve(system, box_cfg(2));
  REQUIRE(roots.size() == 3);
  const double iy = 1.0 / std::sqrt(3.0);
  CHECK(testutil::max_dist(roots[0].point, {2.0 / 3.0, -iy}) <= 1e-8);
  CHECK(testutil::max_dist(roots[1].point, {2.0 / 3.0, iy}) <= 1e-8);
  CHECK(testutil::max_dist(roots[2].point, {1.0, 0.0}) <= 1e-8);
  for (const Root& r : roots) {
    double rn = 0.0;
    for (const Expr& eq : system) rn = std::max(rn, std::abs(evaluate(eq, r.point)));
    CHECK(rn <= 1e-10);
  }
}

TEST_CASE("multistart finds the four real roots of example 2") {
  Problem p = testutil::example_2();
  std::vector<Root> roots = multistart_solve(stationary_system(p), box_cfg(3));
  testutil::Example2Truth truth;
  REQUIRE(roots.size() == 4);
  CHECK(testutil::max_dist(roots[0].point, truth.c) <= 1e-8);
  CHECK(testutil::max_dist(roots[1].point, truth.b) <= 1e-8);
  CHECK(testutil::max_dist(roots[2].point, truth.a) <= 1e-8);
  CHECK(testutil::max_dist(roots[3].point, truth.d) <= 1e-8);
}

TEST_CASE("multistart returns empty when there is no real root") {
  std::vector<Expr> system = {parse("x^2 + 1", {"x"})};
  CHECK(multistart_solve(system, box_cfg(1)).empty());
}

TEST_CASE("grid and random starts are deterministic") {
  SolverConfig cfg = box_cfg(2);
  cfg.grid_per_axis = 3;
  cfg.extra_random_starts = 5;
  std::vector<Point> a = build_starts(cfg);
  std::vector<Point> b = build_starts(cfg);
  REQUIRE(a.size() == 9 + 5);
  CHECK(a == b);
  CHECK(a[0] == Point{-3.0, -3.0});
  CHECK(a[4] == Point{0.0, 0.0});
  CHECK(a[8] == Point{3.0, 3.0});

  cfg.rng_seed = 1;
  CHECK(build_starts(cfg) != a);
}

TEST_CASE("multistart output is fully deterministic for a fixed config") {
  Problem p = testutil::example_2();
  std::vector<Expr> system = stationary_system(p);
  SolverConfig cfg = box_cfg(3);
  std::vector<Root> r1 = multistart_solve(system, cfg);
  std::vector<Root> r2 = multistart_solve(system, cfg);
  REQUIRE(r1.size() == r2.size());
  for (std::size_t i = 0; i < r1.size(); ++i) {
    CHECK(r1[i].point == r2[i].point);  // bitwise
    CHECK(r1[i].residual_norm == r2[i].residual_norm);
    CHECK(r1[i].start_index == r2[i].start_index);
  }
}

TEST_CASE("dedupe keeps the best representative") {
  Root a{{1.0, 0.0}, 1e-12, 3, 0};
  Root b{{1.0 + 1e-9, -1e-9}, 1e-14, 4, 1};
  std::vector<Root> out = dedupe({a, b}, 1e-6);
  REQUIRE(out.size() == 1);
  CHECK(out[0].residual_norm == 1e-14);

  CHECK(dedupe({}, 1e-6).empty());
}

TEST_CASE("dedupe is idempotent and sorts lexicographically") {
  std::mt19937_64 rng(8);
  std::vector<Root> roots;
  for (int i = 0; i < 40; ++i) {
    Point base = testutil::random_point(rng, 2, -2.0, 2.0);
    roots.push_back({base, 1e-12, 1, i});
    Point nudged = base;
    nudged[0] += 1e-9;
    roots.push_back({nudged, 1e-13, 1, i + 100});
  }
  std::vector<Root> once = dedupe(roots, 1e-6);
  std::vector<Root> twice = dedupe(once, 1e-6);
  REQUIRE(once.size() == twice.size());
  for (std::size_t i = 0; i < once.size(); ++i) CHECK(once[i].point == twice[i].point);
  for (std::size_t i = 1; i < once.size(); ++i)
    CHECK(lex_less(once[i - 1].point, once[i].point));
}

TEST_CASE("example 2 boundary system along y dedupes to exactly four points") {
  Problem p = testutil::example_2();
  BoundarySystem bs = boundary_system(p, 1);
  REQUIRE(bs.kind == AxisBoundKind::Bounded);
  SolverConfig cfg = box_cfg(3);
  cfg.grid_per_axis = 13;  // ~2250 grid starts
  cfg.extra_random_starts = 100;
  std::vector<Root> roots = multistart_solve(bs.system, cfg);
  REQUIRE(roots.size() == 4);
  const double r2 = std::sqrt(2.0);
  CHECK(testutil::max_dist(roots[0].point, {-r2, -1.0, 0.0}) <= 1e-8);
  CHECK(testutil::max_dist(roots[1].point, {0.0, 0.0, 1.0}) <= 1e-8);
  CHECK(testutil::max_dist(roots[2].point, {0.0, 3.0, -2.0}) <= 1e-8);
  CHECK(testutil::max_dist(roots[3].point, {r2, -1.0, 0.0}) <= 1e-8);
}

TEST_CASE("solver config validation") {
  SolverConfig cfg = box_cfg(2);
  CHECK_NOTHROW(cfg.validate());
  cfg.box[0] = {1.0, 1.0};
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg = box_cfg(2);
  cfg.residual_tol = 0.0;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg = box_cfg(2);
  cfg.grid_per_axis = 0;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
}
