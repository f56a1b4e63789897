#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ceqopt/problem.hpp"
#include "ceqopt/solver.hpp"

namespace ceqopt {

enum class StationaryLabel { Minimum, Maximum, Inflection, Degenerate, Indeterminate };

const char* label_name(StationaryLabel label);

/// Per-axis curve data at a stationary point. An axis is valid when the
/// constraint matrix S_k is numerically nonsingular there; only then are the
/// curve-restricted derivatives f'_k, f''_k meaningful.
struct AxisData {
  int axis = 0;
  double det_s = 0.0;
  bool valid = false;
  std::optional<double> f_prime;
  std::optional<double> f_second;
  std::optional<double> f_third;
};

struct StationaryPoint {
  Point point;
  double f_value = 0.0;
  std::vector<double> residuals;
  double residual_norm = 0.0;
  int iterations = 0;
  std::vector<AxisData> axes;
  StationaryLabel label = StationaryLabel::Indeterminate;
  std::vector<std::string> notes;
};

struct BoundaryPoint {
  int axis = 0;
  Point point;
  std::vector<double> residuals;
  double residual_norm = 0.0;
};

enum class AxisBoundKind { Bounded, Unbounded, DegenerateAxis };

struct BoundaryAxisResult {
  int axis = 0;
  AxisBoundKind kind = AxisBoundKind::Bounded;
  std::vector<BoundaryPoint> points;
};

struct StationaryResult {
  std::vector<StationaryPoint> points;
  std::vector<std::string> diagnostics;
};

struct BoundariesResult {
  std::vector<BoundaryAxisResult> axes;
  std::vector<std::string> diagnostics;
};

class NotStationaryError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// N equations: det of the problem Jacobian stacked with g_k - C_k.
std::vector<Expr> stationary_system(const Problem& p);

/// The boundary system along one axis: det S_k followed by all constraints.
/// kind == Unbounded when det S_k is a nonzero constant (no finite extremum
/// along that axis), DegenerateAxis when it is identically zero.
struct BoundarySystem {
  AxisBoundKind kind = AxisBoundKind::Bounded;
  std::vector<Expr> system;
};
BoundarySystem boundary_system(const Problem& p, int axis);

StationaryResult find_stationary(const Problem& p, const SolverConfig& cfg);

/// axis: index to restrict to one axis, nullopt for all.
BoundariesResult find_boundaries(const Problem& p, std::optional<int> axis,
                                 const SolverConfig& cfg);

/// Fills axis data and the min/max/inflection/degenerate/indeterminate label
/// for a point already satisfying the stationarity system.
StationaryPoint classify(const Point& candidate, const Problem& p,
                         double residual_tol = 1e-8);

/// Diagnostic: det of the problem Jacobian vanishes at every sample point
/// (constraint gradients linearly dependent with grad f everywhere).
bool determinant_identically_zero(const Problem& p, const SolverConfig& cfg);

}  // namespace ceqopt
