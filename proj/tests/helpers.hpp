#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <random>
#include <vector>

#include "ceqopt/expr.hpp"
#include "ceqopt/matrix.hpp"
#include "ceqopt/problem.hpp"
#include "ceqopt/solver.hpp"

namespace testutil {

using ceqopt::Expr;
using ceqopt::Point;
using ceqopt::Problem;

// --- fixtures -------------------------------------------------------------

inline Problem example_1a() {
  Problem p;
  p.variables = {"x", "y"};
  p.objective = ceqopt::parse("x^2 + 2*y^2", p.variables);
  p.constraints.push_back({ceqopt::parse("x - y^2", p.variables), 1.0});
  return p;
}

inline Problem example_1b() {
  Problem p;
  p.variables = {"x", "y"};
  p.objective = ceqopt::parse("x^2 + 2*y^2 - 2*x*y^2", p.variables);
  p.constraints.push_back({ceqopt::parse("x + y^2", p.variables), 1.0});
  return p;
}

inline Problem example_2() {
  Problem p;
  p.variables = {"x", "y", "z"};
  p.objective = ceqopt::parse("x^2 - 2*y + z^3", p.variables);
  p.constraints.push_back({ceqopt::parse("x^2 + y + z", p.variables), 1.0});
  p.constraints.push_back({ceqopt::parse("y - z^2", p.variables), -1.0});
  return p;
}

inline ceqopt::SolverConfig box_cfg(int n, double lo = -3.0, double hi = 3.0) {
  return ceqopt::SolverConfig::with_box(
      std::vector<std::array<double, 2>>(static_cast<std::size_t>(n), {lo, hi}));
}

// closed-form stationary points of example 2
struct Example2Truth {
  Point a{0.0, 3.0, -2.0};
  Point b{0.0, 0.0, 1.0};
  Point c, d;
  double f_a = -14.0, f_b = 1.0, f_cd = 0.0;
  Example2Truth() {
    const double s3 = std::sqrt(3.0);
    double xr = std::sqrt(2.0 * s3 - 4.0 / 3.0);
    double y = 4.0 * (1.0 - s3) / 3.0;
    double z = 1.0 - 2.0 / s3;
    c = {-xr, y, z};
    d = {xr, y, z};
    f_cd = 1.0 + 16.0 / (3.0 * s3);
  }
};

// --- oracles ---------------------------------------------------------------

// Numeric determinant via Eigen's LU: the independent route the symbolic
// cofactor expansion is checked against.
inline double lu_determinant(const ceqopt::ExprMatrix& m, const Point& p) {
  Eigen::MatrixXd a(m.rows(), m.cols());
  for (int r = 0; r < m.rows(); ++r)
    for (int c = 0; c < m.cols(); ++c) a(r, c) = ceqopt::evaluate(m.at(r, c), p);
  return a.fullPivLu().determinant();
}

inline double central_fd(const Expr& e, int var, const Point& p, double h) {
  Point lo = p, hi = p;
  lo[static_cast<std::size_t>(var)] -= h;
  hi[static_cast<std::size_t>(var)] += h;
  return (ceqopt::evaluate(e, hi) - ceqopt::evaluate(e, lo)) / (2.0 * h);
}

inline double max_dist(const Point& a, const Point& b) {
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
  return d;
}

inline Point random_point(std::mt19937_64& rng, int n, double lo, double hi) {
  std::uniform_real_distribution<double> u(lo, hi);
  Point p(static_cast<std::size_t>(n));
  for (double& v : p) v = u(rng);
  return p;
}

// expressions agree at sampled points (relative tolerance)
inline bool numerically_equal(const Expr& a, const Expr& b, int nvars, double tol = 1e-9,
                              int samples = 100, std::uint64_t seed = 7) {
  std::mt19937_64 rng(seed);
  int checked = 0;
  for (int i = 0; i < samples * 4 && checked < samples; ++i) {
    Point p = random_point(rng, nvars, -2.5, 2.5);
    double va, vb;
    try {
      va = ceqopt::evaluate(a, p);
      vb = ceqopt::evaluate(b, p);
    } catch (const ceqopt::EvalDomainError&) {
      continue;
    }
    if (!std::isfinite(va) || !std::isfinite(vb)) continue;
    if (std::abs(va - vb) > tol * (1.0 + std::max(std::abs(va), std::abs(vb)))) return false;
    ++checked;
  }
  return checked >= samples / 2;
}

// --- random expression generator (for property tests) ----------------------

inline Expr random_expr(std::mt19937_64& rng, int nvars, int depth) {
  std::uniform_int_distribution<int> pick(0, 99);
  std::uniform_real_distribution<double> cval(-3.0, 3.0);
  std::uniform_int_distribution<int> var(0, nvars - 1);
  if (depth <= 0 || pick(rng) < 25) {
    return pick(rng) < 50 ? Expr::constant(cval(rng)) : Expr::variable(var(rng));
  }
  int choice = pick(rng);
  if (choice < 16) return random_expr(rng, nvars, depth - 1) + random_expr(rng, nvars, depth - 1);
  if (choice < 32) return random_expr(rng, nvars, depth - 1) - random_expr(rng, nvars, depth - 1);
  if (choice < 50) return random_expr(rng, nvars, depth - 1) * random_expr(rng, nvars, depth - 1);
  if (choice < 58) return random_expr(rng, nvars, depth - 1) / random_expr(rng, nvars, depth - 1);
  if (choice < 66) {
    std::uniform_int_distribution<int> small(2, 3);
    return Expr::pow(random_expr(rng, nvars, depth - 1), Expr::constant(small(rng)));
  }
  if (choice < 72) return -random_expr(rng, nvars, depth - 1);
  std::uniform_int_distribution<int> fn(0, 5);
  static const ceqopt::FuncId ids[] = {ceqopt::FuncId::Sin, ceqopt::FuncId::Cos,
                                       ceqopt::FuncId::Tan, ceqopt::FuncId::Exp,
                                       ceqopt::FuncId::Log, ceqopt::FuncId::Sqrt};
  return Expr::apply(ids[fn(rng)], random_expr(rng, nvars, depth - 1));
}

}  // namespace testutil
