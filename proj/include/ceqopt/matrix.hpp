#pragma once

#include <vector>

#include "ceqopt/expr.hpp"

namespace ceqopt {

/// Symbolic determinants use cofactor expansion, which is factorial in the
/// matrix side; the build refuses beyond this size.
inline constexpr int kMaxSymbolicDetSide = 8;

class ExprMatrix {
 public:
  ExprMatrix(int rows, int cols);
  int rows() const { return rows_; }
  int cols() const { return cols_; }
  const Expr& at(int r, int c) const;
  Expr& at(int r, int c);

 private:
  int rows_, cols_;
  std::vector<Expr> entries_;
};

/// N x N matrix stacking the objective gradient over the constraint
/// gradients; row 0 is grad f, row k is grad g_k.
ExprMatrix problem_jacobian(const Expr& f, const std::vector<Expr>& g, int nvars);

/// (N-1) x N matrix of constraint partials.
ExprMatrix constraint_jacobian(const std::vector<Expr>& g, int nvars);

/// S_k: the constraint Jacobian with column k removed.
ExprMatrix constraint_matrix(const ExprMatrix& jg, int k);

/// Symbolic determinant via cofactor expansion along the row with the most
/// constant-zero entries; simplified.
Expr determinant(const ExprMatrix& m);

ExprMatrix adjugate(const ExprMatrix& m);

/// dx_i = s_{i,k} dx_k along the constraint set, stored as a shared-
/// denominator family: s_{i,k} = numerators[i] / denominator with
/// denominator = det S_k and numerators[k] = det S_k (so s_{k,k} = 1).
struct InfinitesimalCoeffs {
  int axis = 0;
  std::vector<Expr> numerators;
  Expr denominator;

  /// s_{i,k} at p; throws EvalDomainError when the denominator vanishes.
  double eval_coeff(int i, const Point& p) const;
};

InfinitesimalCoeffs infinitesimal_coeffs(const ExprMatrix& jg, int k);

}  // namespace ceqopt
