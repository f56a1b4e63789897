#include "ceqopt/stationary.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <set>
#include <stdexcept>

#include "ceqopt/taylor.hpp"

namespace ceqopt {

std::vector<Expr> Problem::constraint_exprs() const {
  std::vector<Expr> g;
  g.reserve(constraints.size());
  for (const Constraint& c : constraints) g.push_back(c.g);
  return g;
}

void Problem::validate() const {
  if (variables.size() < 2)
    throw std::invalid_argument("problem: at least two variables are required");
  std::set<std::string> names(variables.begin(), variables.end());
  if (names.size() != variables.size())
    throw std::invalid_argument("problem: duplicate variable name");
  if (constraints.size() != variables.size() - 1)
    throw std::invalid_argument("problem: expected " + std::to_string(variables.size() - 1) +
                                " constraints, found " + std::to_string(constraints.size()) +
                                " (the problem is under- or over-determined)");
}

int Problem::axis_index(const std::string& name) const {
  for (std::size_t i = 0; i < variables.size(); ++i)
    if (variables[i] == name) return static_cast<int>(i);
  return -1;
}

const char* label_name(StationaryLabel label) {
  switch (label) {
    case StationaryLabel::Minimum: return "minimum";
    case StationaryLabel::Maximum: return "maximum";
    case StationaryLabel::Inflection: return "inflection";
    case StationaryLabel::Degenerate: return "degenerate";
    case StationaryLabel::Indeterminate: return "indeterminate";
  }
  return "?";
}

std::vector<Expr> stationary_system(const Problem& p) {
  p.validate();
  const int n = p.dimension();
  std::vector<Expr> system;
  system.reserve(static_cast<std::size_t>(n));
  system.push_back(determinant(problem_jacobian(p.objective, p.constraint_exprs(), n)));
  for (const Constraint& c : p.constraints)
    system.push_back(simplify(c.g - Expr::constant(c.value)));
  return system;
}

BoundarySystem boundary_system(const Problem& p, int axis) {
  p.validate();
  const int n = p.dimension();
  if (axis < 0 || axis >= n) throw std::out_of_range("boundary_system: axis out of range");
  ExprMatrix jg = constraint_jacobian(p.constraint_exprs(), n);
  Expr det_sk = determinant(constraint_matrix(jg, axis));

  BoundarySystem out;
  if (det_sk.is_constant()) {
    out.kind = det_sk.constant_value() == 0.0 ? AxisBoundKind::DegenerateAxis
                                              : AxisBoundKind::Unbounded;
    return out;
  }
  out.kind = AxisBoundKind::Bounded;
  out.system.push_back(det_sk);
  for (const Constraint& c : p.constraints)
    out.system.push_back(simplify(c.g - Expr::constant(c.value)));
  return out;
}

bool determinant_identically_zero(const Problem& p, const SolverConfig& cfg) {
  Expr det = determinant(problem_jacobian(p.objective, p.constraint_exprs(), p.dimension()));
  if (det.is_constant()) return det.constant_value() == 0.0;
  std::mt19937_64 rng(cfg.rng_seed ^ 0x9e3779b97f4a7c15ULL);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  int evaluated = 0;
  for (int s = 0; s < 64 && evaluated < 32; ++s) {
    Point q(p.variables.size());
    for (std::size_t i = 0; i < q.size(); ++i)
      q[i] = cfg.box[i][0] + (cfg.box[i][1] - cfg.box[i][0]) * unit(rng);
    try {
      if (std::abs(evaluate(det, q)) > 1e-9) return false;
      ++evaluated;
    } catch (const EvalDomainError&) {
    }
  }
  return evaluated > 0;
}

namespace {

struct AxisCache {
  Expr det_s;
  std::vector<Expr> s_entries;
  std::vector<Expr> derivatives;  // f'_k, f''_k (as far as buildable)
  std::optional<Expr> third;      // built on demand for degeneracy checks
  bool third_tried = false;
};

std::vector<AxisCache> build_axis_cache(const Problem& p) {
  const int n = p.dimension();
  ExprMatrix jg = constraint_jacobian(p.constraint_exprs(), n);
  std::vector<AxisCache> cache(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) {
    AxisCache& ac = cache[static_cast<std::size_t>(k)];
    ExprMatrix sk = constraint_matrix(jg, k);
    ac.det_s = determinant(sk);
    for (int r = 0; r < sk.rows(); ++r)
      for (int c = 0; c < sk.cols(); ++c) ac.s_entries.push_back(sk.at(r, c));
    try {
      ac.derivatives = curve_derivatives(p, k, 2);
    } catch (const SizeGuardError&) {
      try {
        ac.derivatives = curve_derivatives(p, k, 1);
      } catch (const SizeGuardError&) {
      }
    }
  }
  return cache;
}

const Expr* third_derivative(const Problem& p, int axis, AxisCache& ac) {
  if (!ac.third_tried) {
    ac.third_tried = true;
    try {
      ac.third = curve_derivative(p, axis, 3);
    } catch (const SizeGuardError&) {
    }
  }
  return ac.third ? &*ac.third : nullptr;
}

StationaryPoint classify_cached(const Point& candidate, const Problem& p,
                                const std::vector<Expr>& system,
                                std::vector<AxisCache>& cache, double residual_tol) {
  StationaryPoint sp;
  sp.point = candidate;
  for (const Expr& eq : system) {
    double r = evaluate(eq, candidate);
    sp.residuals.push_back(r);
    sp.residual_norm = std::max(sp.residual_norm, std::abs(r));
  }
  if (sp.residual_norm > residual_tol)
    throw NotStationaryError("candidate does not satisfy the stationarity system (residual " +
                             format_double(sp.residual_norm) + ")");
  sp.f_value = evaluate(p.objective, candidate);

  const double classify_tol = 1e-7 * (1.0 + std::abs(sp.f_value));
  for (std::size_t k = 0; k < cache.size(); ++k) {
    AxisCache& ac = cache[k];
    AxisData ad;
    ad.axis = static_cast<int>(k);
    ad.det_s = evaluate(ac.det_s, candidate);
    double scale = 0.0;
    for (const Expr& entry : ac.s_entries)
      scale = std::max(scale, std::abs(evaluate(entry, candidate)));
    ad.valid = std::abs(ad.det_s) > 1e-8 * scale;
    if (ad.valid) {
      try {
        if (ac.derivatives.size() >= 1) ad.f_prime = evaluate(ac.derivatives[0], candidate);
        if (ac.derivatives.size() >= 2) ad.f_second = evaluate(ac.derivatives[1], candidate);
        if (ad.f_second && std::abs(*ad.f_second) <= classify_tol) {
          // flat second derivative: fetch the third order to tell an
          // inflection from a genuinely degenerate direction
          if (const Expr* t = third_derivative(p, static_cast<int>(k), ac))
            ad.f_third = evaluate(*t, candidate);
        }
      } catch (const EvalDomainError&) {
        ad.valid = false;
        ad.f_prime.reset();
        ad.f_second.reset();
        ad.f_third.reset();
        sp.notes.push_back("axis " + p.variables[k] +
                           ": curve derivative not evaluable at this point");
      }
    }
    sp.axes.push_back(std::move(ad));
  }

  int usable = 0, positive = 0, negative = 0, near_zero = 0;
  bool inflection_like = true;
  for (const AxisData& ad : sp.axes) {
    if (!ad.valid || !ad.f_second) continue;
    ++usable;
    if (std::abs(*ad.f_second) <= classify_tol) {
      ++near_zero;
      if (!ad.f_third || std::abs(*ad.f_third) <= classify_tol) inflection_like = false;
    } else if (*ad.f_second > 0.0) {
      ++positive;
    } else {
      ++negative;
    }
  }
  if (usable == 0) {
    sp.label = StationaryLabel::Indeterminate;
    sp.notes.push_back("no axis with a nonsingular constraint matrix");
  } else if (near_zero > 0) {
    sp.label = inflection_like ? StationaryLabel::Inflection : StationaryLabel::Degenerate;
  } else if (positive == usable) {
    sp.label = StationaryLabel::Minimum;
  } else if (negative == usable) {
    sp.label = StationaryLabel::Maximum;
  } else {
    sp.label = StationaryLabel::Indeterminate;
    sp.notes.push_back("second derivatives disagree in sign across valid axes");
  }
  return sp;
}

}  // namespace

StationaryPoint classify(const Point& candidate, const Problem& p, double residual_tol) {
  p.validate();
  std::vector<Expr> system = stationary_system(p);
  std::vector<AxisCache> cache = build_axis_cache(p);
  return classify_cached(candidate, p, system, cache, residual_tol);
}

StationaryResult find_stationary(const Problem& p, const SolverConfig& cfg) {
  p.validate();
  cfg.validate();
  StationaryResult result;
  if (determinant_identically_zero(p, cfg)) {
    result.diagnostics.push_back(
        "the problem Jacobian determinant vanishes identically: the objective gradient is "
        "everywhere linearly dependent on the constraint gradients; no isolated stationary "
        "points exist");
    return result;
  }
  std::vector<Expr> system = stationary_system(p);
  std::vector<Root> roots = multistart_solve(system, cfg);
  if (roots.empty()) return result;
  std::vector<AxisCache> cache = build_axis_cache(p);
  const double residual_tol = std::max(cfg.residual_tol, 1e-10);
  for (const Root& r : roots) {
    StationaryPoint sp = classify_cached(r.point, p, system, cache, residual_tol * 1.001);
    sp.iterations = r.iterations;
    result.points.push_back(std::move(sp));
  }
  std::sort(result.points.begin(), result.points.end(),
            [](const StationaryPoint& a, const StationaryPoint& b) {
              return lex_less(a.point, b.point);
            });
  return result;
}

BoundariesResult find_boundaries(const Problem& p, std::optional<int> axis,
                                 const SolverConfig& cfg) {
  p.validate();
  cfg.validate();
  BoundariesResult result;
  std::vector<int> axes;
  if (axis) {
    axes.push_back(*axis);
  } else {
    for (int k = 0; k < p.dimension(); ++k) axes.push_back(k);
  }
  for (int k : axes) {
    BoundaryAxisResult ar;
    ar.axis = k;
    BoundarySystem bs = boundary_system(p, k);
    ar.kind = bs.kind;
    if (bs.kind == AxisBoundKind::DegenerateAxis) {
      result.diagnostics.push_back("axis " + p.variables[static_cast<std::size_t>(k)] +
                                   ": constraint matrix is singular everywhere");
    } else if (bs.kind == AxisBoundKind::Bounded) {
      for (const Root& r : multistart_solve(bs.system, cfg)) {
        BoundaryPoint bp;
        bp.axis = k;
        bp.point = r.point;
        for (const Expr& eq : bs.system) {
          double v = evaluate(eq, r.point);
          bp.residuals.push_back(v);
          bp.residual_norm = std::max(bp.residual_norm, std::abs(v));
        }
        ar.points.push_back(std::move(bp));
      }
    }
    result.axes.push_back(std::move(ar));
  }
  return result;
}

}  // namespace ceqopt
