#include "ceqopt/numeric.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <stdexcept>

namespace ceqopt {

bool solve_linear_inplace(std::vector<double>& a, std::vector<double>& b, int n) {
  auto idx = [n](int r, int c) { return static_cast<std::size_t>(r * n + c); };
  double scale = 0.0;
  for (double v : a) scale = std::max(scale, std::abs(v));
  if (scale == 0.0) return false;
  for (int col = 0; col < n; ++col) {
    int pivot = col;
    double best = std::abs(a[idx(col, col)]);
    for (int r = col + 1; r < n; ++r) {
      double v = std::abs(a[idx(r, col)]);
      if (v > best) {
        best = v;
        pivot = r;
      }
    }
    if (!(best > 1e-15 * scale)) return false;
    if (pivot != col) {
      for (int c = col; c < n; ++c) std::swap(a[idx(pivot, c)], a[idx(col, c)]);
      std::swap(b[static_cast<std::size_t>(pivot)], b[static_cast<std::size_t>(col)]);
    }
    double inv = 1.0 / a[idx(col, col)];
    for (int r = col + 1; r < n; ++r) {
      double f = a[idx(r, col)] * inv;
      if (f == 0.0) continue;
      for (int c = col; c < n; ++c) a[idx(r, c)] -= f * a[idx(col, c)];
      b[static_cast<std::size_t>(r)] -= f * b[static_cast<std::size_t>(col)];
    }
  }
  for (int r = n - 1; r >= 0; --r) {
    double sum = b[static_cast<std::size_t>(r)];
    for (int c = r + 1; c < n; ++c) sum -= a[idx(r, c)] * b[static_cast<std::size_t>(c)];
    b[static_cast<std::size_t>(r)] = sum / a[idx(r, r)];
  }
  return true;
}

double smallest_singular_value(const std::vector<double>& a, int rows, int cols) {
  Eigen::MatrixXd m(rows, cols);
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c) m(r, c) = a[static_cast<std::size_t>(r * cols + c)];
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
  return svd.singularValues().minCoeff();
}

std::vector<double> least_squares(const std::vector<double>& a, int rows, int cols,
                                  const std::vector<double>& b) {
  Eigen::MatrixXd m(rows, cols);
  Eigen::VectorXd v(rows);
  for (int r = 0; r < rows; ++r) {
    v(r) = b[static_cast<std::size_t>(r)];
    for (int c = 0; c < cols; ++c) m(r, c) = a[static_cast<std::size_t>(r * cols + c)];
  }
  Eigen::VectorXd x = m.colPivHouseholderQr().solve(v);
  std::vector<double> out(static_cast<std::size_t>(cols));
  for (int c = 0; c < cols; ++c) out[static_cast<std::size_t>(c)] = x(c);
  return out;
}

// B. Fornberg, "Generation of finite difference formulas on arbitrarily
// spaced grids", Math. Comp. 51 (1988).
std::vector<double> fd_weights(const std::vector<double>& nodes, int m) {
  const int n = static_cast<int>(nodes.size());
  if (n <= m) throw std::invalid_argument("fd_weights: need more nodes than derivative order");
  const double x0 = 0.0;
  std::vector<std::vector<double>> c(static_cast<std::size_t>(n),
                                     std::vector<double>(static_cast<std::size_t>(m + 1), 0.0));
  c[0][0] = 1.0;
  double c1 = 1.0;
  double c4 = nodes[0] - x0;
  for (int i = 1; i < n; ++i) {
    int mn = std::min(i, m);
    double c2 = 1.0;
    double c5 = c4;
    c4 = nodes[static_cast<std::size_t>(i)] - x0;
    for (int j = 0; j < i; ++j) {
      double c3 = nodes[static_cast<std::size_t>(i)] - nodes[static_cast<std::size_t>(j)];
      c2 *= c3;
      if (j == i - 1) {
        for (int k = mn; k >= 1; --k)
          c[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)] =
              c1 * (k * c[static_cast<std::size_t>(i - 1)][static_cast<std::size_t>(k - 1)] -
                    c5 * c[static_cast<std::size_t>(i - 1)][static_cast<std::size_t>(k)]) / c2;
        c[static_cast<std::size_t>(i)][0] =
            -c1 * c5 * c[static_cast<std::size_t>(i - 1)][0] / c2;
      }
      for (int k = mn; k >= 1; --k)
        c[static_cast<std::size_t>(j)][static_cast<std::size_t>(k)] =
            (c4 * c[static_cast<std::size_t>(j)][static_cast<std::size_t>(k)] -
             k * c[static_cast<std::size_t>(j)][static_cast<std::size_t>(k - 1)]) / c3;
      c[static_cast<std::size_t>(j)][0] = c4 * c[static_cast<std::size_t>(j)][0] / c3;
    }
    c1 = c2;
  }
  std::vector<double> w(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) w[static_cast<std::size_t>(i)] = c[static_cast<std::size_t>(i)][static_cast<std::size_t>(m)];
  return w;
}

}  // namespace ceqopt
