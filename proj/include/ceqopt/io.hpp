#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "ceqopt/problem.hpp"
#include "ceqopt/report.hpp"
#include "ceqopt/solver.hpp"

namespace ceqopt {

/// Problem-file parse error; line is 1-based.
class ProblemFormatError : public std::runtime_error {
 public:
  ProblemFormatError(std::string message, int line);
  int line() const { return line_; }

 private:
  int line_;
};

/// A parsed problem file: the problem plus its search box (defaulted to
/// [-10, 10] per axis when the file gives none).
struct ProblemFile {
  Problem problem;
  std::vector<std::array<double, 2>> box;
  bool box_given = false;

  SolverConfig solver_config() const { return SolverConfig::with_box(box); }
};

ProblemFile parse_problem_text(const std::string& text);
ProblemFile load_problem(const std::string& path);
std::string print_problem(const ProblemFile& pf);

struct RunOptions {
  std::string command;
  std::optional<std::string> axis;  // variable name or "all"
  std::optional<Point> at;
  int order = 2;
  std::optional<std::array<double, 2>> range;
  int count = 101;
  int contour = 0;
  bool timing = false;
};

/// Executes one pipeline (solve | boundaries | taylor | lagrange | compare)
/// and assembles the report.
RunReport run(const ProblemFile& pf, const SolverConfig& cfg, const RunOptions& opts);

/// Traced constraint-curve samples as CSV (one row per station); for N=2 a
/// contour grid of the objective when opts.contour > 0.
std::string sample_for_plot(const ProblemFile& pf, const SolverConfig& cfg,
                            const RunOptions& opts);

/// Full command-line entry point; returns the process exit code
/// (0 ok, 2 input error, 3 nothing found, 4 size guard).
int run_cli(int argc, char** argv);

}  // namespace ceqopt
