#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ceqopt/lagrange.hpp"
#include "ceqopt/problem.hpp"
#include "ceqopt/solver.hpp"
#include "ceqopt/stationary.hpp"
#include "ceqopt/taylor.hpp"

namespace ceqopt {

/// Everything a run produced, serializable deterministically: point lists
/// are sorted and numbers are emitted in shortest round-trip form, so equal
/// inputs (and seed) give byte-identical reports. timing_ms is filled only
/// when explicitly requested, since wall time is inherently run-dependent.
struct RunReport {
  // problem echo
  std::vector<std::string> variables;
  std::string objective_text;
  std::vector<std::pair<std::string, double>> constraint_texts;

  // config echo
  SolverConfig config;
  std::string command;
  std::optional<std::string> axis_name;
  std::optional<Point> at;
  std::optional<int> order;

  std::vector<StationaryPoint> stationary_points;
  std::vector<LagrangePoint> lagrange_points;
  std::optional<BoundariesResult> boundaries;
  int distinct_boundary_points = 0;
  std::vector<TaylorSeries> taylor;
  std::optional<MatchReport> cross_validation;
  std::vector<std::string> diagnostics;
  std::optional<double> timing_ms;

  bool empty_result() const;
};

std::string emit_report_json(const RunReport& r);
std::string emit_report_csv(const RunReport& r);

}  // namespace ceqopt
