#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <vector>

#include "ceqopt/expr.hpp"
#include "ceqopt/matrix.hpp"
#include "ceqopt/tape.hpp"

namespace ceqopt {

struct SolverConfig {
  std::vector<std::array<double, 2>> box;  // per-variable [lo, hi]
  int grid_per_axis = 7;
  int extra_random_starts = 50;
  std::uint64_t rng_seed = 0;
  int newton_max_iter = 100;
  double residual_tol = 1e-10;
  double step_tol = 1e-12;
  double dedupe_tol = 1e-6;
  double backtrack_factor = 0.5;
  double min_step_multiplier = 1e-6;

  void validate() const;
  static SolverConfig with_box(std::vector<std::array<double, 2>> box);
};

struct Root {
  Point point;
  double residual_norm = 0.0;  // max-norm of the system at point
  int iterations = 0;
  int start_index = -1;
};

enum class NewtonFailureReason {
  SingularJacobian,
  MaxIterations,
  DivergedOutOfBox,
  DomainError,
  Stalled
};

struct NewtonResult {
  std::optional<Root> root;
  NewtonFailureReason reason = NewtonFailureReason::MaxIterations;
  int iterations = 0;
  bool ok() const { return root.has_value(); }
};

/// Jacobian of a square system via symbolic differentiation.
ExprMatrix system_jacobian(const std::vector<Expr>& system, int nvars);

/// Damped Newton from one start; jac must be the symbolic Jacobian of
/// system. The step solves jac * dx = -system by partial-pivot elimination
/// and is halved until the residual max-norm decreases (or the minimum step
/// multiplier is reached, in which case the step is taken anyway).
NewtonResult newton_solve(const std::vector<Expr>& system, const ExprMatrix& jac,
                          const Point& x0, const SolverConfig& cfg);

struct MultistartStats {
  long long total_newton_iterations = 0;
  int starts = 0;
};

/// Grid + seeded-random starts, Newton from each, dedupe, sort
/// lexicographically. Deterministic for a fixed config.
std::vector<Root> multistart_solve(const std::vector<Expr>& system, const SolverConfig& cfg,
                                   MultistartStats* stats = nullptr);

/// Deterministic start list: full grid (grid_per_axis^N, endpoints included)
/// followed by extra_random_starts uniform draws seeded with rng_seed.
std::vector<Point> build_starts(const SolverConfig& cfg);

/// Shared driver: Newton from every start, keep converged roots inside the
/// box inflated by 1%, dedupe, sort.
std::vector<Root> solve_from_starts(const std::vector<Expr>& system, const ExprMatrix& jac,
                                    const std::vector<Point>& starts, const SolverConfig& cfg,
                                    MultistartStats* stats = nullptr);

/// Greedy max-norm clustering; keeps the lowest-residual representative per
/// cluster, output sorted lexicographically.
std::vector<Root> dedupe(std::vector<Root> roots, double tol);

bool lex_less(const Point& a, const Point& b);

}  // namespace ceqopt
