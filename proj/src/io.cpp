#include "ceqopt/io.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>

namespace ceqopt {

ProblemFormatError::ProblemFormatError(std::string message, int line)
    : std::runtime_error("line " + std::to_string(line) + ": " + message), line_(line) {}

namespace {

std::string trim(std::string s) {
  auto not_space = [](unsigned char c) { return !std::isspace(c); };
  s.erase(s.begin(), std::find_if(s.begin(), s.end(), not_space));
  s.erase(std::find_if(s.rbegin(), s.rend(), not_space).base(), s.end());
  return s;
}

double parse_number_strict(const std::string& text, int line) {
  std::string t = trim(text);
  // constant expressions like 1/2 or -3 are accepted
  try {
    Expr e = simplify(parse(t, {}));
    if (!e.is_constant()) throw ProblemFormatError("expected a numeric constant: " + t, line);
    return e.constant_value();
  } catch (const ParseError& pe) {
    throw ProblemFormatError("bad number '" + t + "': " + pe.what(), line);
  }
}

}  // namespace

ProblemFile parse_problem_text(const std::string& text) {
  ProblemFile pf;
  std::optional<std::array<double, 2>> uniform_box;
  std::vector<std::pair<int, std::array<double, 2>>> per_var_box;  // axis, interval
  bool have_vars = false;
  bool have_f = false;

  std::istringstream in(text);
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string line = raw;
    if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    line = trim(line);
    if (line.empty()) continue;

    auto colon = line.find(':');
    if (colon == std::string::npos)
      throw ProblemFormatError("expected '<directive>: ...'", line_no);
    std::string key = trim(line.substr(0, colon));
    std::string rest = trim(line.substr(colon + 1));

    if (key == "vars") {
      if (have_vars) throw ProblemFormatError("duplicate 'vars' directive", line_no);
      std::stringstream names(rest);
      std::string name;
      while (std::getline(names, name, ',')) {
        name = trim(name);
        if (name.empty()) throw ProblemFormatError("empty variable name", line_no);
        pf.problem.variables.push_back(name);
      }
      if (pf.problem.variables.empty())
        throw ProblemFormatError("'vars' lists no variables", line_no);
      have_vars = true;
    } else if (key == "f") {
      if (!have_vars) throw ProblemFormatError("'f' before 'vars'", line_no);
      if (have_f) throw ProblemFormatError("duplicate 'f' directive", line_no);
      try {
        pf.problem.objective = simplify(parse(rest, pf.problem.variables));
      } catch (const ParseError& pe) {
        throw ProblemFormatError(std::string("objective: ") + pe.what(), line_no);
      }
      have_f = true;
    } else if (key == "g") {
      if (!have_vars) throw ProblemFormatError("'g' before 'vars'", line_no);
      auto eq = rest.find('=');
      if (eq == std::string::npos || rest.find('=', eq + 1) != std::string::npos)
        throw ProblemFormatError("constraint must be '<expr> = <value>'", line_no);
      Constraint c;
      try {
        c.g = simplify(parse(rest.substr(0, eq), pf.problem.variables));
      } catch (const ParseError& pe) {
        throw ProblemFormatError(std::string("constraint: ") + pe.what(), line_no);
      }
      c.value = parse_number_strict(rest.substr(eq + 1), line_no);
      pf.problem.constraints.push_back(std::move(c));
    } else if (key == "box") {
      std::stringstream vals(rest);
      double lo, hi;
      if (!(vals >> lo >> hi))
        throw ProblemFormatError("box needs two numbers: 'box: lo hi'", line_no);
      std::string extra;
      if (vals >> extra) throw ProblemFormatError("trailing text after box interval", line_no);
      if (!(lo < hi)) throw ProblemFormatError("box lo must be < hi", line_no);
      uniform_box = {lo, hi};
    } else if (key.rfind("box ", 0) == 0) {
      if (!have_vars) throw ProblemFormatError("per-variable box before 'vars'", line_no);
      std::string name = trim(key.substr(4));
      int axis = pf.problem.axis_index(name);
      if (axis < 0) throw ProblemFormatError("box for unknown variable '" + name + "'", line_no);
      std::stringstream vals(rest);
      double lo, hi;
      if (!(vals >> lo >> hi))
        throw ProblemFormatError("box needs two numbers: 'box " + name + ": lo hi'", line_no);
      if (!(lo < hi)) throw ProblemFormatError("box lo must be < hi", line_no);
      per_var_box.push_back({axis, {lo, hi}});
    } else {
      throw ProblemFormatError("unknown directive '" + key + "'", line_no);
    }
  }

  if (!have_vars) throw ProblemFormatError("missing 'vars' directive", line_no);
  if (!have_f) throw ProblemFormatError("missing 'f' directive", line_no);
  try {
    pf.problem.validate();
  } catch (const std::invalid_argument& e) {
    throw ProblemFormatError(e.what(), line_no);
  }

  pf.box.assign(pf.problem.variables.size(),
                uniform_box.value_or(std::array<double, 2>{-10.0, 10.0}));
  pf.box_given = uniform_box.has_value() || !per_var_box.empty();
  for (const auto& [axis, iv] : per_var_box) pf.box[static_cast<std::size_t>(axis)] = iv;
  return pf;
}

ProblemFile load_problem(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ProblemFormatError("cannot open problem file: " + path, 0);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_problem_text(buf.str());
}

std::string print_problem(const ProblemFile& pf) {
  std::string out = "vars: ";
  for (std::size_t i = 0; i < pf.problem.variables.size(); ++i) {
    if (i) out += ", ";
    out += pf.problem.variables[i];
  }
  out += "\nf: " + to_string(pf.problem.objective, pf.problem.variables) + "\n";
  for (const Constraint& c : pf.problem.constraints)
    out += "g: " + to_string(c.g, pf.problem.variables) + " = " + format_double(c.value) + "\n";
  bool uniform = std::all_of(pf.box.begin(), pf.box.end(),
                             [&](const auto& iv) { return iv == pf.box.front(); });
  if (uniform) {
    out += "box: " + format_double(pf.box[0][0]) + " " + format_double(pf.box[0][1]) + "\n";
  } else {
    for (std::size_t i = 0; i < pf.box.size(); ++i)
      out += "box " + pf.problem.variables[i] + ": " + format_double(pf.box[i][0]) + " " +
             format_double(pf.box[i][1]) + "\n";
  }
  return out;
}

// ---------------------------------------------------------------------------
// run orchestration

namespace {

int resolve_axis(const Problem& p, const std::string& name) {
  int axis = p.axis_index(name);
  if (axis < 0) throw std::invalid_argument("unknown axis '" + name + "'");
  return axis;
}

int count_distinct_points(const BoundariesResult& br, double tol) {
  std::vector<Point> distinct;
  for (const BoundaryAxisResult& ar : br.axes) {
    for (const BoundaryPoint& bp : ar.points) {
      bool seen = false;
      for (const Point& q : distinct) {
        double dist = 0.0;
        for (std::size_t i = 0; i < q.size(); ++i)
          dist = std::max(dist, std::abs(q[i] - bp.point[i]));
        if (dist <= tol) {
          seen = true;
          break;
        }
      }
      if (!seen) distinct.push_back(bp.point);
    }
  }
  return static_cast<int>(distinct.size());
}

}  // namespace

bool RunReport::empty_result() const {
  if (command == "solve" || command == "lagrange" || command == "compare")
    return stationary_points.empty() && lagrange_points.empty();
  if (command == "boundaries") {
    if (!boundaries) return true;
    bool any_flagged = false;
    int total = 0;
    for (const BoundaryAxisResult& ar : boundaries->axes) {
      total += static_cast<int>(ar.points.size());
      if (ar.kind != AxisBoundKind::Bounded) any_flagged = true;
    }
    return total == 0 && !any_flagged;
  }
  return false;
}

RunReport run(const ProblemFile& pf, const SolverConfig& cfg, const RunOptions& opts) {
  const Problem& p = pf.problem;
  p.validate();
  cfg.validate();

  RunReport r;
  r.variables = p.variables;
  r.objective_text = to_string(p.objective, p.variables);
  for (const Constraint& c : p.constraints)
    r.constraint_texts.push_back({to_string(c.g, p.variables), c.value});
  r.config = cfg;
  r.command = opts.command;
  r.axis_name = opts.axis;
  r.at = opts.at;

  auto t0 = std::chrono::steady_clock::now();

  if (opts.command == "solve") {
    StationaryResult sr = find_stationary(p, cfg);
    r.stationary_points = std::move(sr.points);
    r.diagnostics = std::move(sr.diagnostics);
  } else if (opts.command == "boundaries") {
    std::optional<int> axis;
    if (opts.axis && *opts.axis != "all") axis = resolve_axis(p, *opts.axis);
    BoundariesResult br = find_boundaries(p, axis, cfg);
    r.diagnostics = br.diagnostics;
    r.distinct_boundary_points = count_distinct_points(br, cfg.dedupe_tol);
    r.boundaries = std::move(br);
  } else if (opts.command == "taylor") {
    if (!opts.axis || *opts.axis == "all")
      throw std::invalid_argument("taylor requires --axis with a single variable name");
    if (!opts.at) throw std::invalid_argument("taylor requires --at \"v1,v2,...\"");
    r.order = opts.order;
    TaylorSeries ts = taylor_series(p, resolve_axis(p, *opts.axis), *opts.at, opts.order);
    for (const std::string& w : ts.warnings) r.diagnostics.push_back(w);
    r.taylor.push_back(std::move(ts));
  } else if (opts.command == "lagrange") {
    r.lagrange_points = find_stationary_lagrange(p, cfg);
  } else if (opts.command == "compare") {
    StationaryResult sr = find_stationary(p, cfg);
    r.stationary_points = std::move(sr.points);
    r.diagnostics = std::move(sr.diagnostics);
    r.lagrange_points = find_stationary_lagrange(p, cfg);
    r.cross_validation = cross_validate(p, r.stationary_points, r.lagrange_points,
                                        std::max(cfg.dedupe_tol, 1e-7));
  } else {
    throw std::invalid_argument("unknown command '" + opts.command + "'");
  }

  if (opts.timing) {
    auto t1 = std::chrono::steady_clock::now();
    r.timing_ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
  }
  return r;
}

// ---------------------------------------------------------------------------
// plot sampling

std::string sample_for_plot(const ProblemFile& pf, const SolverConfig& cfg,
                            const RunOptions& opts) {
  const Problem& p = pf.problem;
  p.validate();
  cfg.validate();

  if (opts.contour > 0) {
    if (p.dimension() != 2)
      throw std::invalid_argument("contour grids are only available for 2-variable problems");
    const int k = opts.contour;
    std::string out = "# contour grid " + std::to_string(k) + "x" + std::to_string(k) + "\n";
    out += p.variables[0] + "," + p.variables[1] + ",f\n";
    for (int i = 0; i < k; ++i) {
      for (int j = 0; j < k; ++j) {
        double x = cfg.box[0][0] + (cfg.box[0][1] - cfg.box[0][0]) *
                                       (k == 1 ? 0.5 : static_cast<double>(i) / (k - 1));
        double y = cfg.box[1][0] + (cfg.box[1][1] - cfg.box[1][0]) *
                                       (k == 1 ? 0.5 : static_cast<double>(j) / (k - 1));
        double f;
        try {
          f = evaluate(p.objective, {x, y});
        } catch (const EvalDomainError&) {
          continue;
        }
        out += format_double(x) + "," + format_double(y) + "," + format_double(f) + "\n";
      }
    }
    return out;
  }

  if (!opts.axis || *opts.axis == "all")
    throw std::invalid_argument("sample requires --axis with a single variable name");
  const int axis = resolve_axis(p, *opts.axis);
  const auto range =
      opts.range.value_or(std::array<double, 2>{cfg.box[static_cast<std::size_t>(axis)][0],
                                                cfg.box[static_cast<std::size_t>(axis)][1]});
  if (!(range[0] <= range[1])) throw std::invalid_argument("sample range lo must be <= hi");
  const int count = std::max(1, opts.count);

  // anchor: --at when given, otherwise a curve point found by pinning the
  // axis at scan stations (augmented square system, multistart)
  Point anchor;
  if (opts.at) {
    anchor = *opts.at;
    double rn = 0.0;
    for (const Constraint& c : p.constraints)
      rn = std::max(rn, std::abs(evaluate(c.g, anchor) - c.value));
    if (rn > 1e-8) throw NotOnCurveError("sample: --at point is not on the constraint curve");
  } else {
    std::vector<double> scan;
    for (int i = 0; i <= 8; ++i) scan.push_back(range[0] + (range[1] - range[0]) * i / 8.0);
    std::sort(scan.begin(), scan.end(), [&](double a, double b) {
      double mid = 0.5 * (range[0] + range[1]);
      return std::abs(a - mid) < std::abs(b - mid);
    });
    bool found = false;
    for (double t : scan) {
      std::vector<Expr> system;
      for (const Constraint& c : p.constraints)
        system.push_back(simplify(c.g - Expr::constant(c.value)));
      system.push_back(simplify(Expr::variable(axis) - Expr::constant(t)));
      SolverConfig scan_cfg = cfg;
      scan_cfg.grid_per_axis = std::max(3, std::min(5, cfg.grid_per_axis));
      std::vector<Root> roots = multistart_solve(system, scan_cfg);
      if (!roots.empty()) {
        anchor = roots.front().point;
        found = true;
        break;
      }
    }
    if (!found)
      throw std::invalid_argument("sample: no constraint-curve point found in the range");
  }

  std::string header;
  std::string body = [&] {
    std::string rows;
    if (count == 1) {
      for (std::size_t i = 0; i < anchor.size(); ++i)
        rows += (i ? "," : "") + format_double(anchor[i]);
      rows += "," + format_double(evaluate(p.objective, anchor)) + "\n";
      return rows;
    }
    const double step = (range[1] - range[0]) / (count - 1);
    const double a = anchor[static_cast<std::size_t>(axis)];
    const int need = static_cast<int>(std::ceil(
                         std::max(range[1] - a, a - range[0]) / step)) + 1;
    CurveSample s = trace_curve(p, axis, anchor, step, need);
    int emitted = 0;
    for (std::size_t i = 0; i < s.points.size(); ++i) {
      double t = s.parameters[i];
      if (t < range[0] - 1e-12 || t > range[1] + 1e-12) continue;
      for (std::size_t j = 0; j < s.points[i].size(); ++j)
        rows += (j ? "," : "") + format_double(s.points[i][j]);
      rows += "," + format_double(s.f_values[i]) + "\n";
      ++emitted;
    }
    if (emitted < count)
      header += "# truncated: curve tracing stopped before covering the requested range (" +
                std::to_string(emitted) + " of " + std::to_string(count) + " samples)\n";
    return rows;
  }();

  std::string cols;
  for (std::size_t i = 0; i < p.variables.size(); ++i) cols += (i ? "," : "") + p.variables[i];
  cols += ",f\n";
  return header + cols + body;
}

// ---------------------------------------------------------------------------
// CLI

int run_cli(int argc, char** argv) {
  CLI::App app{"stationary points of an objective under N-1 equality constraints, "
               "constraint-curve boundaries, and curve-restricted Taylor expansions"};
  app.require_subcommand(1);

  std::string problem_path;
  std::string axis;
  std::string at_text;
  std::string range_text;
  int order = 2;
  int count = 101;
  int contour = 0;
  int grid = 0;
  int starts = -1;
  std::uint64_t seed = 0;
  bool seed_given = false;
  double tol = 0.0;
  std::string json_path, csv_path;
  bool timing = false;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("problem", problem_path, "problem file")->required();
    sub->add_option("--axis", axis, "axis name, or 'all'");
    sub->add_option("--at", at_text, "comma-separated point coordinates");
    sub->add_option("--order", order, "Taylor order");
    sub->add_option("--range", range_text, "sample range 'lo,hi'");
    sub->add_option("--count", count, "sample count");
    sub->add_option("--contour", contour, "emit a KxK objective grid (N=2 sample)");
    sub->add_option("--grid", grid, "multistart grid points per axis");
    sub->add_option("--starts", starts, "extra random starts");
    sub->add_option("--seed", seed, "random-start seed")->each([&](const std::string&) {
      seed_given = true;
    });
    sub->add_option("--tol", tol, "Newton residual tolerance");
    sub->add_option("--json", json_path, "write the JSON report here");
    sub->add_option("--csv", csv_path, "write the CSV report here");
    sub->add_flag("--timing", timing, "include wall time in the report");
  };
  for (const char* name : {"solve", "boundaries", "taylor", "lagrange", "compare", "sample"})
    add_common(app.add_subcommand(name));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }

  try {
    ProblemFile pf = load_problem(problem_path);
    SolverConfig cfg = pf.solver_config();
    if (grid > 0) cfg.grid_per_axis = grid;
    if (starts >= 0) cfg.extra_random_starts = starts;
    if (seed_given) cfg.rng_seed = seed;
    if (tol > 0.0) cfg.residual_tol = tol;

    RunOptions opts;
    opts.command = app.get_subcommands().front()->get_name();
    if (!axis.empty()) opts.axis = axis;
    if (!at_text.empty()) {
      Point at;
      std::stringstream ss(at_text);
      std::string piece;
      while (std::getline(ss, piece, ',')) at.push_back(std::stod(trim(piece)));
      if (at.size() != pf.problem.variables.size())
        throw std::invalid_argument("--at needs one value per variable");
      opts.at = at;
    }
    if (!range_text.empty()) {
      std::stringstream ss(range_text);
      std::string lo, hi;
      if (!std::getline(ss, lo, ',') || !std::getline(ss, hi))
        throw std::invalid_argument("--range must be 'lo,hi'");
      opts.range = {std::stod(trim(lo)), std::stod(trim(hi))};
    }
    opts.order = order;
    opts.count = count;
    opts.contour = contour;
    opts.timing = timing;

    if (opts.command == "sample") {
      std::string csv = sample_for_plot(pf, cfg, opts);
      if (!csv_path.empty()) {
        std::ofstream out(csv_path, std::ios::binary);
        out << csv;
      } else {
        std::cout << csv;
      }
      return 0;
    }

    RunReport report = run(pf, cfg, opts);
    std::string json = emit_report_json(report);
    if (!json_path.empty()) {
      std::ofstream out(json_path, std::ios::binary);
      out << json << "\n";
    }
    if (!csv_path.empty()) {
      std::ofstream out(csv_path, std::ios::binary);
      out << emit_report_csv(report);
    }
    if (json_path.empty() && csv_path.empty()) std::cout << json << "\n";
    return report.empty_result() ? 3 : 0;
  } catch (const SizeGuardError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 4;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}

}  // namespace ceqopt
