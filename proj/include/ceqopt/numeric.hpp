#pragma once

#include <vector>

namespace ceqopt {

/// Solves A x = b in place by Gaussian elimination with partial pivoting.
/// A is n*n row-major and is destroyed; the solution lands in b.
/// Returns false when a pivot is effectively zero.
bool solve_linear_inplace(std::vector<double>& a, std::vector<double>& b, int n);

/// Smallest singular value of a rows x cols row-major matrix (Eigen-backed).
double smallest_singular_value(const std::vector<double>& a, int rows, int cols);

/// Least-squares solution of A x = b (rows x cols, rows >= cols).
std::vector<double> least_squares(const std::vector<double>& a, int rows, int cols,
                                  const std::vector<double>& b);

/// Finite-difference weights for the m-th derivative at 0 on the given nodes
/// (Fornberg's recurrence). nodes.size() must exceed m.
std::vector<double> fd_weights(const std::vector<double>& nodes, int m);

}  // namespace ceqopt
