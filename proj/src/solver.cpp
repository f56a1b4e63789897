#include "ceqopt/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <span>
#include <stdexcept>

#include "ceqopt/numeric.hpp"

namespace ceqopt {

void SolverConfig::validate() const {
  if (box.empty()) throw std::invalid_argument("solver config: empty search box");
  for (const auto& iv : box)
    if (!(iv[0] < iv[1])) throw std::invalid_argument("solver config: box lo must be < hi");
  if (grid_per_axis < 1 || extra_random_starts < 0 || newton_max_iter < 1)
    throw std::invalid_argument("solver config: counts must be positive");
  if (residual_tol <= 0 || step_tol <= 0 || dedupe_tol <= 0 || min_step_multiplier <= 0 ||
      backtrack_factor <= 0 || backtrack_factor >= 1)
    throw std::invalid_argument("solver config: tolerances must be positive");
}

SolverConfig SolverConfig::with_box(std::vector<std::array<double, 2>> box) {
  SolverConfig cfg;
  cfg.box = std::move(box);
  return cfg;
}

bool lex_less(const Point& a, const Point& b) {
  return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

namespace {

double max_norm(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

bool inside_scaled_box(const Point& p, const std::vector<std::array<double, 2>>& box,
                       double inflate) {
  for (std::size_t i = 0; i < p.size(); ++i) {
    double half = 0.5 * (box[i][1] - box[i][0]) * inflate;
    double mid = 0.5 * (box[i][0] + box[i][1]);
    if (p[i] < mid - half || p[i] > mid + half) return false;
  }
  return true;
}

struct NewtonWorkspace {
  std::vector<double> scratch;
  std::vector<double> residual;
  std::vector<double> trial_residual;
  std::vector<double> full;  // residual followed by jacobian entries
  std::vector<double> jac;
  std::vector<double> rhs;
};

NewtonResult newton_from(const CompiledTape& sys_tape, const CompiledTape& full_tape,
                         const Point& x0, const SolverConfig& cfg, NewtonWorkspace& ws) {
  const int n = sys_tape.output_count();
  NewtonResult result;
  Point x = x0;
  ws.residual.resize(static_cast<std::size_t>(n));
  ws.trial_residual.resize(static_cast<std::size_t>(n));
  ws.full.resize(static_cast<std::size_t>(n + n * n));
  Point trial(static_cast<std::size_t>(n));

  if (sys_tape.evaluate(x, ws.residual, ws.scratch) != EvalStatus::Ok) {
    result.reason = NewtonFailureReason::DomainError;
    return result;
  }
  double rnorm = max_norm(ws.residual);
  if (!std::isfinite(rnorm)) {
    result.reason = NewtonFailureReason::DivergedOutOfBox;
    return result;
  }

  // Polishing pass: once inside tolerance, keep stepping while the residual
  // still drops markedly. Multiple roots converge only linearly, so the
  // iterate that first meets the tolerance can sit ~sqrt(tol) away from the
  // root; the extra steps sharpen it to evaluation noise.
  auto polish = [&](Point pt, std::vector<double> res, double norm) {
    for (int extra = 0; extra < 40 && norm > 0.0; ++extra) {
      if (full_tape.evaluate(pt, ws.full, ws.scratch) != EvalStatus::Ok) break;
      ws.jac.assign(ws.full.begin() + n, ws.full.end());
      ws.rhs.assign(ws.full.begin(), ws.full.begin() + n);
      for (double& v : ws.rhs) v = -v;
      if (!solve_linear_inplace(ws.jac, ws.rhs, n)) break;
      Point trial = pt;
      for (int i = 0; i < n; ++i)
        trial[static_cast<std::size_t>(i)] += ws.rhs[static_cast<std::size_t>(i)];
      if (sys_tape.evaluate(trial, ws.trial_residual, ws.scratch) != EvalStatus::Ok) break;
      double tnorm = max_norm(ws.trial_residual);
      if (!(tnorm < 0.5 * norm)) break;
      pt = std::move(trial);
      res = ws.trial_residual;
      norm = tnorm;
    }
    return Root{std::move(pt), norm, 0, -1};
  };

  for (int iter = 0; iter < cfg.newton_max_iter; ++iter) {
    if (rnorm <= cfg.residual_tol) {
      result.root = polish(std::move(x), ws.residual, rnorm);
      result.root->iterations = iter;
      result.iterations = iter;
      return result;
    }
    if (full_tape.evaluate(x, ws.full, ws.scratch) != EvalStatus::Ok) {
      result.reason = NewtonFailureReason::DomainError;
      result.iterations = iter;
      return result;
    }
    ws.jac.assign(ws.full.begin() + n, ws.full.end());
    ws.rhs.assign(ws.full.begin(), ws.full.begin() + n);
    for (double& v : ws.rhs) v = -v;
    if (!solve_linear_inplace(ws.jac, ws.rhs, n)) {
      result.reason = NewtonFailureReason::SingularJacobian;
      result.iterations = iter;
      return result;
    }

    // backtracking line search on the residual max-norm
    double t = 1.0;
    double trial_norm = 0.0;
    bool accepted = false;
    while (true) {
      for (int i = 0; i < n; ++i)
        trial[static_cast<std::size_t>(i)] =
            x[static_cast<std::size_t>(i)] + t * ws.rhs[static_cast<std::size_t>(i)];
      bool ok = sys_tape.evaluate(trial, ws.trial_residual, ws.scratch) == EvalStatus::Ok;
      trial_norm = ok ? max_norm(ws.trial_residual) : std::numeric_limits<double>::infinity();
      if (ok && trial_norm < rnorm) {
        accepted = true;
        break;
      }
      if (t <= cfg.min_step_multiplier) {
        accepted = ok;  // take the floor step if it is at least evaluable
        break;
      }
      t = std::max(t * cfg.backtrack_factor, cfg.min_step_multiplier);
    }
    if (!accepted) {
      result.reason = NewtonFailureReason::DomainError;
      result.iterations = iter + 1;
      return result;
    }

    double step_norm = 0.0;
    for (int i = 0; i < n; ++i)
      step_norm = std::max(step_norm, std::abs(t * ws.rhs[static_cast<std::size_t>(i)]));
    x.swap(trial);
    std::swap(ws.residual, ws.trial_residual);
    rnorm = trial_norm;
    result.iterations = iter + 1;

    if (!inside_scaled_box(x, cfg.box, 10.0)) {
      result.reason = NewtonFailureReason::DivergedOutOfBox;
      return result;
    }
    if (step_norm <= cfg.step_tol) {
      if (rnorm <= cfg.residual_tol) {
        result.root = polish(std::move(x), ws.residual, rnorm);
        result.root->iterations = result.iterations;
        return result;
      }
      result.reason = NewtonFailureReason::Stalled;
      return result;
    }
  }
  if (rnorm <= cfg.residual_tol) {
    result.root = polish(std::move(x), ws.residual, rnorm);
    result.root->iterations = cfg.newton_max_iter;
    result.iterations = cfg.newton_max_iter;
    return result;
  }
  result.reason = NewtonFailureReason::MaxIterations;
  return result;
}

}  // namespace

ExprMatrix system_jacobian(const std::vector<Expr>& system, int nvars) {
  ExprMatrix jac(static_cast<int>(system.size()), nvars);
  for (std::size_t r = 0; r < system.size(); ++r)
    for (int c = 0; c < nvars; ++c)
      jac.at(static_cast<int>(r), c) = differentiate(system[r], c);
  return jac;
}

NewtonResult newton_solve(const std::vector<Expr>& system, const ExprMatrix& jac,
                          const Point& x0, const SolverConfig& cfg) {
  cfg.validate();
  const int n = static_cast<int>(system.size());
  if (jac.rows() != n || jac.cols() != n)
    throw std::invalid_argument("newton_solve: jacobian shape does not match system");
  if (static_cast<int>(x0.size()) != n)
    throw std::invalid_argument("newton_solve: start point dimension mismatch");

  std::vector<Expr> all = system;
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c) all.push_back(jac.at(r, c));
  CompiledTape sys_tape = CompiledTape::compile(std::span(system.data(), system.size()), n);
  CompiledTape full_tape = CompiledTape::compile(std::span(all.data(), all.size()), n);

  NewtonWorkspace ws;
  return newton_from(sys_tape, full_tape, x0, cfg, ws);
}

std::vector<Point> build_starts(const SolverConfig& cfg) {
  const int n = static_cast<int>(cfg.box.size());
  std::vector<Point> starts;
  const int g = cfg.grid_per_axis;
  long long total = 1;
  for (int i = 0; i < n; ++i) total *= g;
  starts.reserve(static_cast<std::size_t>(total + cfg.extra_random_starts));

  std::vector<int> idx(static_cast<std::size_t>(n), 0);
  for (long long t = 0; t < total; ++t) {
    Point p(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
      double lo = cfg.box[static_cast<std::size_t>(i)][0];
      double hi = cfg.box[static_cast<std::size_t>(i)][1];
      p[static_cast<std::size_t>(i)] =
          g == 1 ? 0.5 * (lo + hi)
                 : lo + (hi - lo) * static_cast<double>(idx[static_cast<std::size_t>(i)]) /
                           static_cast<double>(g - 1);
    }
    starts.push_back(std::move(p));
    for (int i = n - 1; i >= 0; --i) {
      if (++idx[static_cast<std::size_t>(i)] < g) break;
      idx[static_cast<std::size_t>(i)] = 0;
    }
  }

  std::mt19937_64 rng(cfg.rng_seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int s = 0; s < cfg.extra_random_starts; ++s) {
    Point p(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
      double lo = cfg.box[static_cast<std::size_t>(i)][0];
      double hi = cfg.box[static_cast<std::size_t>(i)][1];
      p[static_cast<std::size_t>(i)] = lo + (hi - lo) * unit(rng);
    }
    starts.push_back(std::move(p));
  }
  return starts;
}

std::vector<Root> solve_from_starts(const std::vector<Expr>& system, const ExprMatrix& jac,
                                    const std::vector<Point>& starts, const SolverConfig& cfg,
                                    MultistartStats* stats) {
  cfg.validate();
  const int n = static_cast<int>(system.size());
  if (static_cast<int>(cfg.box.size()) != n)
    throw std::invalid_argument("solve_from_starts: box dimension does not match system");

  std::vector<Expr> all = system;
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c) all.push_back(jac.at(r, c));
  CompiledTape sys_tape = CompiledTape::compile(std::span(system.data(), system.size()), n);
  CompiledTape full_tape = CompiledTape::compile(std::span(all.data(), all.size()), n);

  NewtonWorkspace ws;
  std::vector<Root> found;
  long long total_iters = 0;
  for (std::size_t s = 0; s < starts.size(); ++s) {
    NewtonResult r = newton_from(sys_tape, full_tape, starts[s], cfg, ws);
    total_iters += r.iterations;
    if (!r.ok()) continue;
    if (!inside_scaled_box(r.root->point, cfg.box, 1.01)) continue;
    r.root->start_index = static_cast<int>(s);
    found.push_back(std::move(*r.root));
  }
  if (stats) {
    stats->total_newton_iterations += total_iters;
    stats->starts += static_cast<int>(starts.size());
  }
  return dedupe(std::move(found), cfg.dedupe_tol);
}

std::vector<Root> multistart_solve(const std::vector<Expr>& system, const SolverConfig& cfg,
                                   MultistartStats* stats) {
  cfg.validate();
  ExprMatrix jac = system_jacobian(system, static_cast<int>(system.size()));
  return solve_from_starts(system, jac, build_starts(cfg), cfg, stats);
}

std::vector<Root> dedupe(std::vector<Root> roots, double tol) {
  std::sort(roots.begin(), roots.end(),
            [](const Root& a, const Root& b) { return lex_less(a.point, b.point); });
  std::vector<Root> reps;
  for (Root& r : roots) {
    bool merged = false;
    for (Root& rep : reps) {
      double dist = 0.0;
      for (std::size_t i = 0; i < r.point.size(); ++i)
        dist = std::max(dist, std::abs(r.point[i] - rep.point[i]));
      if (dist <= tol) {
        if (r.residual_norm < rep.residual_norm) rep = r;
        merged = true;
        break;
      }
    }
    if (!merged) reps.push_back(std::move(r));
  }
  std::sort(reps.begin(), reps.end(),
            [](const Root& a, const Root& b) { return lex_less(a.point, b.point); });
  return reps;
}

}  // namespace ceqopt
