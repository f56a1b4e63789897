#pragma once

#include <string>
#include <vector>

#include "ceqopt/expr.hpp"

namespace ceqopt {

struct Constraint {
  Expr g;
  double value = 0.0;  // target C_k
};

/// N variables, an objective, and exactly N-1 equality constraints
/// g_k(x) = C_k.
struct Problem {
  std::vector<std::string> variables;
  Expr objective;
  std::vector<Constraint> constraints;

  int dimension() const { return static_cast<int>(variables.size()); }
  std::vector<Expr> constraint_exprs() const;
  void validate() const;
  int axis_index(const std::string& name) const;  // -1 when unknown
};

}  // namespace ceqopt
