#pragma once

#include <array>
#include <vector>

#include "ceqopt/problem.hpp"
#include "ceqopt/solver.hpp"
#include "ceqopt/stationary.hpp"

namespace ceqopt {

struct LagrangePoint {
  Point point;                       // x-coordinates only, length N
  std::vector<double> multipliers;   // lambda_1..lambda_{N-1}
  double residual_norm = 0.0;
};

/// Classical multiplier formulation over the extended variable list
/// (x_1..x_N, lambda_1..lambda_{N-1}):
/// df/dx_j - sum_k lambda_k dg_k/dx_j = 0 for each j, then g_k - C_k = 0.
std::vector<Expr> lagrangian_system(const Problem& p);

/// Multistart over the x-grid with multipliers seeded from the least-squares
/// fit of grad f on the constraint gradients at each start, plus fully random
/// starts in the extended box. Results are projected and deduplicated on x.
std::vector<LagrangePoint> find_stationary_lagrange(
    const Problem& p, const SolverConfig& cfg,
    std::array<double, 2> lambda_box = {-100.0, 100.0}, MultistartStats* stats = nullptr);

struct MatchReport {
  struct Pair {
    int det_index = 0;
    int lagrange_index = 0;
    double distance = 0.0;
  };
  std::vector<Pair> matched;
  std::vector<int> det_only;
  std::vector<double> det_only_multiplier_residuals;  // least-squares, per det_only entry
  std::vector<int> lagrange_only;
  bool fully_matched() const { return det_only.empty() && lagrange_only.empty(); }
};

/// Bipartite matching of the two root sets by max-norm distance <= tol.
MatchReport cross_validate(const Problem& p, const std::vector<StationaryPoint>& det_points,
                           const std::vector<LagrangePoint>& lag_points, double tol);

/// Least-squares multipliers of grad f = sum lambda_k grad g_k at a point and
/// the norm of the defect.
struct MultiplierFit {
  std::vector<double> multipliers;
  double residual = 0.0;
};
MultiplierFit fit_multipliers(const Problem& p, const Point& at);

struct MethodTiming {
  double median_ms = 0.0;
  long long total_newton_iterations = 0;
  int starts = 0;
  int roots_found = 0;
};

struct BenchmarkReport {
  MethodTiming determinant_method;
  MethodTiming lagrange_method;
  bool root_sets_match = false;
  bool degenerate = false;
  int repetitions = 0;
};

/// Runs both pipelines `repetitions` times on the same problem and config.
BenchmarkReport benchmark_methods(const Problem& p, const SolverConfig& cfg, int repetitions);

}  // namespace ceqopt
