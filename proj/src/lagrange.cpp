#include "ceqopt/lagrange.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <random>

#include "ceqopt/numeric.hpp"

namespace ceqopt {

std::vector<Expr> lagrangian_system(const Problem& p) {
  p.validate();
  const int n = p.dimension();
  const int m = n - 1;
  std::vector<Expr> system;
  system.reserve(static_cast<std::size_t>(n + m));
  for (int j = 0; j < n; ++j) {
    Expr eq = differentiate(p.objective, j);
    for (int k = 0; k < m; ++k) {
      Expr dg = differentiate(p.constraints[static_cast<std::size_t>(k)].g, j);
      if (dg.is_constant(0.0)) continue;
      eq = eq - Expr::variable(n + k) * dg;
    }
    system.push_back(simplify(eq));
  }
  for (const Constraint& c : p.constraints)
    system.push_back(simplify(c.g - Expr::constant(c.value)));
  return system;
}

MultiplierFit fit_multipliers(const Problem& p, const Point& at) {
  const int n = p.dimension();
  const int m = n - 1;
  // rows: gradient components; columns: constraints
  std::vector<double> a(static_cast<std::size_t>(n) * static_cast<std::size_t>(m));
  std::vector<double> b(static_cast<std::size_t>(n));
  for (int j = 0; j < n; ++j) {
    b[static_cast<std::size_t>(j)] = evaluate(differentiate(p.objective, j), at);
    for (int k = 0; k < m; ++k)
      a[static_cast<std::size_t>(j) * static_cast<std::size_t>(m) + static_cast<std::size_t>(k)] =
          evaluate(differentiate(p.constraints[static_cast<std::size_t>(k)].g, j), at);
  }
  MultiplierFit fit;
  fit.multipliers = least_squares(a, n, m, b);
  double norm2 = 0.0;
  for (int j = 0; j < n; ++j) {
    double r = b[static_cast<std::size_t>(j)];
    for (int k = 0; k < m; ++k)
      r -= a[static_cast<std::size_t>(j) * static_cast<std::size_t>(m) +
             static_cast<std::size_t>(k)] *
           fit.multipliers[static_cast<std::size_t>(k)];
    norm2 += r * r;
  }
  fit.residual = std::sqrt(norm2);
  return fit;
}

std::vector<LagrangePoint> find_stationary_lagrange(const Problem& p, const SolverConfig& cfg,
                                                    std::array<double, 2> lambda_box,
                                                    MultistartStats* stats) {
  p.validate();
  cfg.validate();
  const int n = p.dimension();
  const int m = n - 1;
  const int ext = n + m;

  std::vector<Expr> system = lagrangian_system(p);
  ExprMatrix jac = system_jacobian(system, ext);

  SolverConfig ext_cfg = cfg;
  ext_cfg.box.resize(static_cast<std::size_t>(ext));
  for (int k = 0; k < m; ++k) ext_cfg.box[static_cast<std::size_t>(n + k)] = lambda_box;

  // x-grid starts carry least-squares multiplier seeds; the extra random
  // starts draw lambda uniformly from its box
  std::vector<Point> starts;
  SolverConfig grid_cfg = cfg;
  grid_cfg.extra_random_starts = 0;
  for (Point& x : build_starts(grid_cfg)) {
    MultiplierFit fit = fit_multipliers(p, x);
    Point s = std::move(x);
    s.resize(static_cast<std::size_t>(ext));
    for (int k = 0; k < m; ++k)
      s[static_cast<std::size_t>(n + k)] =
          std::clamp(fit.multipliers[static_cast<std::size_t>(k)], lambda_box[0], lambda_box[1]);
    starts.push_back(std::move(s));
  }
  std::mt19937_64 rng(cfg.rng_seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int s = 0; s < cfg.extra_random_starts; ++s) {
    Point q(static_cast<std::size_t>(ext));
    for (int i = 0; i < ext; ++i) {
      const auto& iv = ext_cfg.box[static_cast<std::size_t>(i)];
      q[static_cast<std::size_t>(i)] = iv[0] + (iv[1] - iv[0]) * unit(rng);
    }
    starts.push_back(std::move(q));
  }

  std::vector<Root> roots = solve_from_starts(system, jac, starts, ext_cfg, stats);

  // project onto x and dedupe there
  std::vector<Root> projected;
  for (Root& r : roots) {
    Root pr = r;
    pr.point.assign(r.point.begin(), r.point.begin() + n);
    projected.push_back(std::move(pr));
  }
  projected = dedupe(std::move(projected), cfg.dedupe_tol);

  std::vector<LagrangePoint> out;
  for (const Root& pr : projected) {
    // recover the multipliers of the representative from the full root list:
    // prefer the exact root the dedupe kept (same residual), else any x-match
    const Root* full = nullptr;
    for (const Root& r : roots) {
      bool same = true;
      for (int i = 0; i < n; ++i)
        if (std::abs(r.point[static_cast<std::size_t>(i)] -
                     pr.point[static_cast<std::size_t>(i)]) > cfg.dedupe_tol) {
          same = false;
          break;
        }
      if (!same) continue;
      if (!full) full = &r;
      if (r.residual_norm == pr.residual_norm) {
        full = &r;
        break;
      }
    }
    LagrangePoint lp;
    lp.point = pr.point;
    lp.residual_norm = pr.residual_norm;
    if (full)
      lp.multipliers.assign(full->point.begin() + n, full->point.end());
    else
      lp.multipliers = fit_multipliers(p, pr.point).multipliers;
    out.push_back(std::move(lp));
  }
  return out;
}

MatchReport cross_validate(const Problem& p, const std::vector<StationaryPoint>& det_points,
                           const std::vector<LagrangePoint>& lag_points, double tol) {
  MatchReport report;
  std::vector<bool> lag_used(lag_points.size(), false);
  for (std::size_t d = 0; d < det_points.size(); ++d) {
    int best = -1;
    double best_dist = std::numeric_limits<double>::infinity();
    for (std::size_t l = 0; l < lag_points.size(); ++l) {
      if (lag_used[l]) continue;
      double dist = 0.0;
      for (std::size_t i = 0; i < det_points[d].point.size(); ++i)
        dist = std::max(dist, std::abs(det_points[d].point[i] - lag_points[l].point[i]));
      if (dist < best_dist) {
        best_dist = dist;
        best = static_cast<int>(l);
      }
    }
    if (best >= 0 && best_dist <= tol) {
      lag_used[static_cast<std::size_t>(best)] = true;
      report.matched.push_back({static_cast<int>(d), best, best_dist});
    } else {
      report.det_only.push_back(static_cast<int>(d));
      report.det_only_multiplier_residuals.push_back(
          fit_multipliers(p, det_points[d].point).residual);
    }
  }
  for (std::size_t l = 0; l < lag_points.size(); ++l)
    if (!lag_used[l]) report.lagrange_only.push_back(static_cast<int>(l));
  return report;
}

BenchmarkReport benchmark_methods(const Problem& p, const SolverConfig& cfg, int repetitions) {
  p.validate();
  cfg.validate();
  if (repetitions < 1) throw std::invalid_argument("benchmark_methods: repetitions >= 1");

  BenchmarkReport report;
  report.repetitions = repetitions;
  if (determinant_identically_zero(p, cfg)) {
    report.degenerate = true;
    return report;
  }

  auto median = [](std::vector<double> v) {
    std::sort(v.begin(), v.end());
    std::size_t n = v.size();
    return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
  };

  std::vector<double> det_ms, lag_ms;
  std::vector<StationaryPoint> det_pts;
  std::vector<LagrangePoint> lag_pts;
  for (int rep = 0; rep < repetitions; ++rep) {
    auto t0 = std::chrono::steady_clock::now();
    MultistartStats ds;
    std::vector<Expr> system = stationary_system(p);
    std::vector<Root> roots =
        solve_from_starts(system, system_jacobian(system, p.dimension()), build_starts(cfg),
                          cfg, &ds);
    auto t1 = std::chrono::steady_clock::now();
    det_ms.push_back(std::chrono::duration<double, std::milli>(t1 - t0).count());
    if (rep == 0) {
      report.determinant_method.total_newton_iterations = ds.total_newton_iterations;
      report.determinant_method.starts = ds.starts;
      report.determinant_method.roots_found = static_cast<int>(roots.size());
      StationaryResult sr = find_stationary(p, cfg);
      det_pts = sr.points;
    }
  }
  for (int rep = 0; rep < repetitions; ++rep) {
    auto t0 = std::chrono::steady_clock::now();
    MultistartStats ls;
    std::vector<LagrangePoint> pts = find_stationary_lagrange(p, cfg, {-100.0, 100.0}, &ls);
    auto t1 = std::chrono::steady_clock::now();
    lag_ms.push_back(std::chrono::duration<double, std::milli>(t1 - t0).count());
    if (rep == 0) {
      report.lagrange_method.total_newton_iterations = ls.total_newton_iterations;
      report.lagrange_method.starts = ls.starts;
      report.lagrange_method.roots_found = static_cast<int>(pts.size());
      lag_pts = std::move(pts);
    }
  }
  report.determinant_method.median_ms = median(det_ms);
  report.lagrange_method.median_ms = median(lag_ms);
  report.root_sets_match =
      det_pts.size() == lag_pts.size() &&
      cross_validate(p, det_pts, lag_pts, 1e-6).fully_matched();
  return report;
}

}  // namespace ceqopt
