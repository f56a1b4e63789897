#include "ceqopt/taylor.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <span>

#include "ceqopt/numeric.hpp"
#include "ceqopt/poly.hpp"
#include "ceqopt/tape.hpp"

namespace ceqopt {

namespace {

// polynomial view of the infinitesimal coefficients, when available
struct PolyCoeffs {
  std::vector<MultiPoly> numerators;
  MultiPoly denominator{0};
};

std::optional<PolyCoeffs> poly_coeffs(const InfinitesimalCoeffs& coeffs, int nvars) {
  PolyCoeffs pc;
  auto d = MultiPoly::from_expr(coeffs.denominator, nvars);
  if (!d) return std::nullopt;
  pc.denominator = *d;
  for (const Expr& num : coeffs.numerators) {
    auto p = MultiPoly::from_expr(num, nvars);
    if (!p) return std::nullopt;
    pc.numerators.push_back(*p);
  }
  return pc;
}

// The chain state is P / D^e with D = det S_k fixed per axis. One more
// derivative along the curve gives
//   sum_i (d_i P * D - e * P * d_i D) * N_i  /  D^(e+2)
// and the removable D factors (the paper's fold cancellations) are divided
// back out eagerly, which keeps the denominator an honest power instead of a
// squared-out polynomial.
struct PowerRational {
  MultiPoly num{0};
  int den_exponent = 0;
};

// one-shot derivative of a general rational pair, with the full cancellation
// pass on the result (used by the public single-application entry point)
RationalPoly rational_step(const RationalPoly& cur, const PolyCoeffs& pc) {
  const int nv = cur.num.nvars();
  MultiPoly assembled(nv);
  for (int i = 0; i < nv; ++i) {
    const MultiPoly& ni = pc.numerators[static_cast<std::size_t>(i)];
    if (ni.is_zero()) continue;
    MultiPoly term = cur.num.derivative(i) * cur.den - cur.num * cur.den.derivative(i);
    if (term.is_zero()) continue;
    assembled += term * ni;
  }
  MultiPoly den = cur.den * cur.den * pc.denominator;
  return cancel_rational({std::move(assembled), std::move(den)});
}

PowerRational power_step(const PowerRational& cur, const MultiPoly& d, const PolyCoeffs& pc) {
  const int nv = cur.num.nvars();
  MultiPoly assembled(nv);
  for (int i = 0; i < nv; ++i) {
    const MultiPoly& ni = pc.numerators[static_cast<std::size_t>(i)];
    if (ni.is_zero()) continue;
    MultiPoly term = cur.num.derivative(i);
    if (cur.den_exponent > 0) {
      term = term * d;
      term -= (cur.num * d.derivative(i)).scaled(static_cast<double>(cur.den_exponent));
    }
    if (term.is_zero()) continue;
    assembled += term * ni;
  }
  PowerRational out;
  out.num = std::move(assembled);
  out.den_exponent = cur.den_exponent == 0 ? 1 : cur.den_exponent + 2;
  while (out.den_exponent > 0 && !out.num.is_zero()) {
    auto q = MultiPoly::divide_exact(out.num, d);
    if (!q) break;
    out.num = std::move(*q);
    --out.den_exponent;
  }
  if (out.num.is_zero()) out.den_exponent = 0;
  return out;
}

Expr power_to_expr(const PowerRational& pr, const MultiPoly& d) {
  if (pr.den_exponent == 0) return pr.num.to_expr();
  // small denominators get the full cancellation pass for tidier output
  double size = std::pow(static_cast<double>(d.term_count()), pr.den_exponent);
  if (size <= 128.0) {
    RationalPoly r = cancel_rational({pr.num, d.pow(pr.den_exponent)});
    return rational_to_expr(r);
  }
  Expr den = d.to_expr();
  if (pr.den_exponent > 1)
    den = Expr::pow(den, Expr::constant(static_cast<double>(pr.den_exponent)));
  return pr.num.to_expr() / den;
}

Expr symbolic_step(const Expr& cur, const InfinitesimalCoeffs& coeffs) {
  const int nv = static_cast<int>(coeffs.numerators.size());
  Expr num;
  bool have = false;
  for (int i = 0; i < nv; ++i) {
    const Expr& ni = coeffs.numerators[static_cast<std::size_t>(i)];
    if (ni.is_constant(0.0)) continue;
    Expr di = differentiate(cur, i);
    if (di.is_constant(0.0)) continue;
    Expr term = di * ni;
    num = have ? num + term : term;
    have = true;
  }
  if (!have) return Expr::constant(0.0);
  if (coeffs.denominator.is_constant(1.0)) return simplify(num);
  return simplify(num / coeffs.denominator);
}

}  // namespace

Expr directional_derivative(const Expr& e, const InfinitesimalCoeffs& coeffs) {
  const int nv = static_cast<int>(coeffs.numerators.size());
  if (auto pc = poly_coeffs(coeffs, nv)) {
    if (auto cur = rational_from_expr(e, nv)) {
      RationalPoly r = rational_step(cancel_rational(*cur), *pc);
      return simplify(rational_to_expr(r));
    }
  }
  return symbolic_step(e, coeffs);
}

std::vector<Expr> curve_derivatives(const Problem& p, int axis, int max_order) {
  p.validate();
  const int n = p.dimension();
  if (axis < 0 || axis >= n) throw std::out_of_range("curve_derivatives: axis out of range");
  if (max_order < 1) throw std::invalid_argument("curve_derivatives: order must be >= 1");

  ExprMatrix jg = constraint_jacobian(p.constraint_exprs(), n);
  InfinitesimalCoeffs coeffs = infinitesimal_coeffs(jg, axis);
  auto pc = poly_coeffs(coeffs, n);
  auto start_rational = pc ? rational_from_expr(p.objective, n) : std::nullopt;

  std::vector<Expr> out;
  if (pc && start_rational && start_rational->den.is_constant()) {
    PowerRational cur;
    cur.num = start_rational->num.scaled(1.0 / start_rational->den.constant_value());
    cur.den_exponent = 0;
    for (int m = 1; m <= max_order; ++m) {
      cur = power_step(cur, pc->denominator, *pc);
      if (static_cast<std::size_t>(cur.num.term_count()) > kCurveDerivativeNodeGuard)
        throw SizeGuardError("curve derivative of order " + std::to_string(m) +
                             " exceeds the size guard; use the numeric curve oracle instead");
      out.push_back(simplify(power_to_expr(cur, pc->denominator)));
    }
  } else {
    Expr cur = p.objective;
    for (int m = 1; m <= max_order; ++m) {
      cur = symbolic_step(cur, coeffs);
      if (cur.node_count() > kCurveDerivativeNodeGuard)
        throw SizeGuardError("curve derivative of order " + std::to_string(m) +
                             " exceeds the size guard; use the numeric curve oracle instead");
      out.push_back(cur);
    }
  }
  return out;
}

Expr curve_derivative(const Problem& p, int axis, int order) {
  return curve_derivatives(p, axis, order).back();
}

// ---------------------------------------------------------------------------
// curve tracing

namespace {

constexpr double kOnCurveTol = 1e-8;
constexpr double kTraceTargetTol = 1e-12;
constexpr double kTraceAcceptTol = 1e-10;

double constraint_residual_norm(const Problem& p, const Point& q) {
  double m = 0.0;
  for (const Constraint& c : p.constraints)
    m = std::max(m, std::abs(evaluate(c.g, q) - c.value));
  return m;
}

struct ReducedNewton {
  const Problem& p;
  int axis;
  std::vector<int> free_vars;
  CompiledTape residual_tape;  // N-1 constraint residuals, input = full point
  CompiledTape jac_tape;       // (N-1)^2 partials wrt free vars
  mutable std::vector<double> scratch;

  explicit ReducedNewton(const Problem& prob, int ax) : p(prob), axis(ax) {
    const int n = p.dimension();
    for (int i = 0; i < n; ++i)
      if (i != axis) free_vars.push_back(i);
    std::vector<Expr> res;
    for (const Constraint& c : p.constraints)
      res.push_back(simplify(c.g - Expr::constant(c.value)));
    std::vector<Expr> jac;
    for (const Expr& r : res)
      for (int fv : free_vars) jac.push_back(differentiate(r, fv));
    residual_tape = CompiledTape::compile(std::span(res.data(), res.size()), n);
    jac_tape = CompiledTape::compile(std::span(jac.data(), jac.size()), n);
  }

  // Newton in the free variables with x_axis pinned; nullopt on failure.
  std::optional<Point> solve_once(Point q) const {
    const int m = static_cast<int>(free_vars.size());
    std::vector<double> r(static_cast<std::size_t>(m));
    std::vector<double> rt(static_cast<std::size_t>(m));
    std::vector<double> jac(static_cast<std::size_t>(m) * static_cast<std::size_t>(m));
    std::vector<double> step;
    if (residual_tape.evaluate(q, r, scratch) != EvalStatus::Ok) return std::nullopt;
    auto norm = [](const std::vector<double>& v) {
      double s = 0.0;
      for (double x : v) s = std::max(s, std::abs(x));
      return s;
    };
    double rnorm = norm(r);
    for (int iter = 0; iter < 80; ++iter) {
      if (rnorm <= kTraceTargetTol) return q;
      if (jac_tape.evaluate(q, jac, scratch) != EvalStatus::Ok) return std::nullopt;
      std::vector<double> a = jac;
      step = r;
      for (double& v : step) v = -v;
      if (!solve_linear_inplace(a, step, m)) break;
      double t = 1.0;
      Point trial = q;
      bool accepted = false;
      double tnorm = 0.0;
      while (true) {
        for (int i = 0; i < m; ++i)
          trial[static_cast<std::size_t>(free_vars[static_cast<std::size_t>(i)])] =
              q[static_cast<std::size_t>(free_vars[static_cast<std::size_t>(i)])] +
              t * step[static_cast<std::size_t>(i)];
        bool ok = residual_tape.evaluate(trial, rt, scratch) == EvalStatus::Ok;
        tnorm = ok ? norm(rt) : std::numeric_limits<double>::infinity();
        if (ok && tnorm < rnorm) {
          accepted = true;
          break;
        }
        if (t <= 1e-8) break;
        t *= 0.5;
      }
      if (!accepted) break;
      q = trial;
      r = rt;
      rnorm = tnorm;
      if (!std::isfinite(rnorm)) return std::nullopt;
    }
    return rnorm <= kTraceAcceptTol ? std::optional<Point>(q) : std::nullopt;
  }

  // Folds leave the warm start on a singular Jacobian; deterministic jitter
  // gives Newton a side of the fold to fall into.
  std::optional<Point> solve(double param, const Point& warm) const {
    Point q = warm;
    q[static_cast<std::size_t>(axis)] = param;
    if (auto r = solve_once(q)) return r;
    for (double scale : {1e-4, -1e-4, 1e-2, -1e-2}) {
      Point jq = q;
      for (int fv : free_vars) {
        auto i = static_cast<std::size_t>(fv);
        jq[i] += scale * (1.0 + std::abs(jq[i]));
      }
      if (auto r = solve_once(jq)) return r;
    }
    return std::nullopt;
  }
};

}  // namespace

CurveSample trace_curve(const Problem& p, int axis, const Point& start, double step,
                        int count) {
  p.validate();
  const int n = p.dimension();
  if (axis < 0 || axis >= n) throw std::out_of_range("trace_curve: axis out of range");
  if (static_cast<int>(start.size()) != n)
    throw std::invalid_argument("trace_curve: start point dimension mismatch");
  if (!(step > 0.0)) throw std::invalid_argument("trace_curve: step must be positive");
  if (constraint_residual_norm(p, start) > kOnCurveTol)
    throw NotOnCurveError("trace_curve: start point does not satisfy the constraints");

  ReducedNewton solver(p, axis);
  const double p0 = start[static_cast<std::size_t>(axis)];

  std::vector<Point> forward, backward;
  Point warm = start;
  for (int j = 1; j <= count; ++j) {
    auto q = solver.solve(p0 + j * step, warm);
    if (!q) break;
    forward.push_back(*q);
    warm = *q;
  }
  warm = start;
  for (int j = 1; j <= count; ++j) {
    auto q = solver.solve(p0 - j * step, warm);
    if (!q) break;
    backward.push_back(*q);
    warm = *q;
  }

  CurveSample sample;
  sample.axis = axis;
  sample.center_index = static_cast<int>(backward.size());
  for (auto it = backward.rbegin(); it != backward.rend(); ++it) sample.points.push_back(*it);
  sample.points.push_back(start);
  for (Point& q : forward) sample.points.push_back(std::move(q));
  for (const Point& q : sample.points) {
    sample.parameters.push_back(q[static_cast<std::size_t>(axis)]);
    sample.f_values.push_back(evaluate(p.objective, q));
  }
  return sample;
}

std::vector<double> numeric_curve_derivatives(const CurveSample& sample, int center_index,
                                              int max_order) {
  const int n = static_cast<int>(sample.parameters.size());
  if (max_order < 1) throw std::invalid_argument("numeric_curve_derivatives: order >= 1");
  if (center_index < 0 || center_index >= n)
    throw InsufficientStencilError("center index outside the sample");
  if (n < 2) throw InsufficientStencilError("sample too small");

  double h = sample.parameters[1] - sample.parameters[0];
  for (int i = 1; i + 1 < n; ++i) {
    double d = sample.parameters[static_cast<std::size_t>(i + 1)] -
               sample.parameters[static_cast<std::size_t>(i)];
    if (std::abs(d - h) > 1e-6 * std::abs(h))
      throw InsufficientStencilError("sample is not uniformly spaced");
  }

  std::vector<double> out;
  for (int m = 1; m <= max_order; ++m) {
    int r = (m + 1) / 2;
    if (center_index - 2 * r < 0 || center_index + 2 * r >= n)
      throw InsufficientStencilError("not enough points around the center for order " +
                                     std::to_string(m));
    auto stencil = [&](int spacing) {
      std::vector<double> nodes, values;
      for (int j = -r; j <= r; ++j) {
        nodes.push_back(j * spacing * h);
        values.push_back(
            sample.f_values[static_cast<std::size_t>(center_index + j * spacing)]);
      }
      std::vector<double> w = fd_weights(nodes, m);
      double acc = 0.0;
      for (std::size_t i = 0; i < w.size(); ++i) acc += w[i] * values[i];
      return acc;
    };
    double d1 = stencil(1);
    double d2 = stencil(2);
    out.push_back((4.0 * d1 - d2) / 3.0);  // both stencils are O(h^2)
  }
  return out;
}

double default_trace_step(const SolverConfig& cfg) {
  double width = 0.0;
  for (const auto& iv : cfg.box) width = std::max(width, iv[1] - iv[0]);
  return std::clamp(width / 1000.0, 1e-6, 1e-2);
}

// ---------------------------------------------------------------------------
// taylor series

namespace {

double factorial(int m) {
  double f = 1.0;
  for (int i = 2; i <= m; ++i) f *= i;
  return f;
}

// Polynomial least-squares fit of (f(t) - f(0)) on traced samples at node
// scale h; returns Taylor coefficients c_1..c_order, or nullopt when the
// curve gives too few nodes.
std::optional<std::vector<double>> fit_series(const Problem& p, int axis, const Point& center,
                                              int order, double h, double f0, int* degree_out) {
  CurveSample s;
  try {
    s = trace_curve(p, axis, center, h, order + 3);
  } catch (const NotOnCurveError&) {
    return std::nullopt;
  }
  const int nodes = static_cast<int>(s.parameters.size());
  if (nodes < order + 2) return std::nullopt;
  const int degree = std::min(order + 2, nodes - 1);
  if (degree_out) *degree_out = degree;

  const double t0 = center[static_cast<std::size_t>(axis)];
  std::vector<double> a(static_cast<std::size_t>(nodes) * static_cast<std::size_t>(degree));
  std::vector<double> b(static_cast<std::size_t>(nodes));
  for (int i = 0; i < nodes; ++i) {
    double tau = (s.parameters[static_cast<std::size_t>(i)] - t0) / h;
    double pw = 1.0;
    for (int d = 0; d < degree; ++d) {
      pw *= tau;
      a[static_cast<std::size_t>(i) * static_cast<std::size_t>(degree) +
        static_cast<std::size_t>(d)] = pw;
    }
    b[static_cast<std::size_t>(i)] = s.f_values[static_cast<std::size_t>(i)] - f0;
  }
  std::vector<double> coef = least_squares(a, nodes, degree, b);
  std::vector<double> out;
  double hp = 1.0;
  for (int m = 1; m <= order; ++m) {
    hp *= h;
    out.push_back(coef[static_cast<std::size_t>(m - 1)] / hp);
  }
  return out;
}

}  // namespace

TaylorSeries taylor_series(const Problem& p, int axis, const Point& center, int order) {
  p.validate();
  const int n = p.dimension();
  if (axis < 0 || axis >= n) throw std::out_of_range("taylor_series: axis out of range");
  if (order < 0) throw std::invalid_argument("taylor_series: order must be >= 0");
  if (static_cast<int>(center.size()) != n)
    throw std::invalid_argument("taylor_series: center dimension mismatch");
  if (constraint_residual_norm(p, center) > kOnCurveTol)
    throw NotOnCurveError("taylor_series: center does not satisfy the constraints");

  TaylorSeries ts;
  ts.axis = axis;
  ts.center = center;
  ts.order = order;
  ts.coefficients.push_back(evaluate(p.objective, center));

  ExprMatrix jg = constraint_jacobian(p.constraint_exprs(), n);
  ExprMatrix sk = constraint_matrix(jg, axis);
  double det_val = evaluate(determinant(sk), center);
  double scale = 0.0;
  for (int r = 0; r < sk.rows(); ++r)
    for (int c = 0; c < sk.cols(); ++c)
      scale = std::max(scale, std::abs(evaluate(sk.at(r, c), center)));
  ts.singular_parametrization = !(std::abs(det_val) > 1e-8 * scale);
  if (ts.singular_parametrization)
    ts.warnings.push_back(
        "constraint matrix is singular at the center; the parametrization folds and the "
        "series describes the traced branch");

  if (order == 0) return ts;

  bool symbolic_ok = true;
  std::vector<double> values;
  try {
    std::vector<Expr> derivatives = curve_derivatives(p, axis, order);
    for (const Expr& d : derivatives) values.push_back(evaluate(d, center));
  } catch (const EvalDomainError&) {
    symbolic_ok = false;
  } catch (const SizeGuardError&) {
    symbolic_ok = false;
  }

  if (!symbolic_ok) {
    // removable singularity that did not cancel symbolically: estimate from
    // traced-curve samples at two scales and Richardson-extrapolate
    ts.warnings.push_back("symbolic curve derivatives hit a vanishing denominator at the "
                          "center; coefficients were fitted from traced samples");
    const double h = 5e-3 * (1.0 + std::abs(center[static_cast<std::size_t>(axis)]));
    int deg_coarse = 0, deg_fine = 0;
    auto coarse = fit_series(p, axis, center, order, h, ts.coefficients[0], &deg_coarse);
    auto fine = fit_series(p, axis, center, order, h / 2.0, ts.coefficients[0], &deg_fine);
    if (!coarse || !fine)
      throw SingularSeriesError(
          "taylor_series: the curve could not be traced far enough around a singular "
          "parametrization to estimate the series");
    const int degree = std::min(deg_coarse, deg_fine);
    values.resize(static_cast<std::size_t>(order));
    for (int m = 1; m <= order; ++m) {
      double c1 = (*coarse)[static_cast<std::size_t>(m - 1)];
      double c2 = (*fine)[static_cast<std::size_t>(m - 1)];
      double q = std::pow(2.0, degree + 1 - m);
      double extr = (q * c2 - c1) / (q - 1.0);
      if (!std::isfinite(extr))
        throw SingularSeriesError("taylor_series: extrapolation diverged");
      values[static_cast<std::size_t>(m - 1)] = extr * factorial(m);  // store derivative
    }
  }

  for (int m = 1; m <= order; ++m)
    ts.coefficients.push_back(values[static_cast<std::size_t>(m - 1)] / factorial(m));
  return ts;
}

}  // namespace ceqopt
