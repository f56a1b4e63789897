#pragma once

#include <string>
#include <vector>

#include "ceqopt/matrix.hpp"
#include "ceqopt/problem.hpp"
#include "ceqopt/solver.hpp"

namespace ceqopt {

/// Taylor coefficients of the objective along one axis, restricted to the
/// constraint curve: c_m = f^(m)_k(center) / m!.
struct TaylorSeries {
  int axis = 0;
  Point center;
  int order = 0;
  std::vector<double> coefficients;
  bool singular_parametrization = false;
  std::vector<std::string> warnings;
};

/// Points marched along the constraint curve, parameterized by one axis.
struct CurveSample {
  int axis = 0;
  std::vector<double> parameters;
  std::vector<Point> points;
  std::vector<double> f_values;
  int center_index = 0;  // position of the start point
};

class NotOnCurveError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class SingularSeriesError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InsufficientStencilError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Derivative of e along axis k on the constraint set:
/// sum_i (de/dx_i) * s_{i,k}, assembled over the shared denominator det S_k.
/// Common polynomial factors between numerator and denominator are divided
/// out when detectable; otherwise the quotient stays symbolic.
Expr directional_derivative(const Expr& e, const InfinitesimalCoeffs& coeffs);

/// m-fold application of the directional derivative starting from the
/// objective: the symbolic f^(m)_k as a function of all variables.
Expr curve_derivative(const Problem& p, int axis, int order);

/// All orders 1..max_order in one pass (the chain is built incrementally).
std::vector<Expr> curve_derivatives(const Problem& p, int axis, int max_order);

/// Node budget for repeated symbolic derivation.
inline constexpr std::size_t kCurveDerivativeNodeGuard = 1000000;

TaylorSeries taylor_series(const Problem& p, int axis, const Point& center, int order);

/// Marches x_k by +-step, solving the N-1 constraints for the remaining
/// variables at each station (warm-started). A direction stops early at a
/// fold or solver failure. count = stations per direction.
CurveSample trace_curve(const Problem& p, int axis, const Point& start, double step,
                        int count);

/// Central finite differences with one Richardson refinement on a uniformly
/// spaced sample; returns derivatives 1..max_order of f along the sample's
/// axis at center_index.
std::vector<double> numeric_curve_derivatives(const CurveSample& sample, int center_index,
                                              int max_order);

double default_trace_step(const SolverConfig& cfg);

}  // namespace ceqopt
