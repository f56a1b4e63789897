#include "ceqopt/matrix.hpp"

#include <stdexcept>

namespace ceqopt {

ExprMatrix::ExprMatrix(int rows, int cols)
    : rows_(rows), cols_(cols),
      entries_(static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols)) {
  if (rows < 0 || cols < 0) throw std::invalid_argument("negative matrix dimension");
}

const Expr& ExprMatrix::at(int r, int c) const {
  return entries_[static_cast<std::size_t>(r) * static_cast<std::size_t>(cols_) +
                  static_cast<std::size_t>(c)];
}

Expr& ExprMatrix::at(int r, int c) {
  return entries_[static_cast<std::size_t>(r) * static_cast<std::size_t>(cols_) +
                  static_cast<std::size_t>(c)];
}

ExprMatrix problem_jacobian(const Expr& f, const std::vector<Expr>& g, int nvars) {
  if (static_cast<int>(g.size()) != nvars - 1)
    throw std::invalid_argument("problem_jacobian: expected N-1 constraints, found " +
                                std::to_string(g.size()));
  ExprMatrix m(nvars, nvars);
  for (int j = 0; j < nvars; ++j) m.at(0, j) = differentiate(f, j);
  for (int k = 1; k < nvars; ++k)
    for (int j = 0; j < nvars; ++j)
      m.at(k, j) = differentiate(g[static_cast<std::size_t>(k - 1)], j);
  return m;
}

ExprMatrix constraint_jacobian(const std::vector<Expr>& g, int nvars) {
  if (static_cast<int>(g.size()) != nvars - 1)
    throw std::invalid_argument("constraint_jacobian: expected N-1 constraints, found " +
                                std::to_string(g.size()));
  ExprMatrix m(nvars - 1, nvars);
  for (int k = 0; k < nvars - 1; ++k)
    for (int j = 0; j < nvars; ++j)
      m.at(k, j) = differentiate(g[static_cast<std::size_t>(k)], j);
  return m;
}

ExprMatrix constraint_matrix(const ExprMatrix& jg, int k) {
  if (jg.rows() + 1 != jg.cols())
    throw std::invalid_argument("constraint_matrix: expected an (N-1) x N matrix");
  if (k < 0 || k >= jg.cols()) throw std::out_of_range("constraint_matrix: axis out of range");
  ExprMatrix s(jg.rows(), jg.cols() - 1);
  for (int r = 0; r < jg.rows(); ++r) {
    int cc = 0;
    for (int c = 0; c < jg.cols(); ++c) {
      if (c == k) continue;
      s.at(r, cc++) = jg.at(r, c);
    }
  }
  return s;
}

namespace {

ExprMatrix minor_matrix(const ExprMatrix& m, int row, int col) {
  ExprMatrix r(m.rows() - 1, m.cols() - 1);
  int rr = 0;
  for (int i = 0; i < m.rows(); ++i) {
    if (i == row) continue;
    int cc = 0;
    for (int j = 0; j < m.cols(); ++j) {
      if (j == col) continue;
      r.at(rr, cc++) = m.at(i, j);
    }
    ++rr;
  }
  return r;
}

Expr det_recursive(const ExprMatrix& m) {
  const int n = m.rows();
  if (n == 0) return Expr::constant(1.0);
  if (n == 1) return m.at(0, 0);

  int best_row = 0;
  int best_zeros = -1;
  for (int r = 0; r < n; ++r) {
    int zeros = 0;
    for (int c = 0; c < n; ++c)
      if (m.at(r, c).is_constant(0.0)) ++zeros;
    if (zeros > best_zeros) {
      best_zeros = zeros;
      best_row = r;
    }
  }

  Expr sum;
  bool have_term = false;
  for (int c = 0; c < n; ++c) {
    const Expr& entry = m.at(best_row, c);
    if (entry.is_constant(0.0)) continue;
    Expr term = entry * det_recursive(minor_matrix(m, best_row, c));
    bool negative = (best_row + c) % 2 != 0;
    if (!have_term) {
      sum = negative ? -term : term;
      have_term = true;
    } else {
      sum = negative ? sum - term : sum + term;
    }
  }
  if (!have_term) return Expr::constant(0.0);
  return sum;
}

}  // namespace

Expr determinant(const ExprMatrix& m) {
  if (m.rows() != m.cols()) throw std::invalid_argument("determinant: matrix is not square");
  if (m.rows() > kMaxSymbolicDetSide)
    throw SizeGuardError("determinant: symbolic cofactor expansion is limited to side " +
                         std::to_string(kMaxSymbolicDetSide) + ", got " +
                         std::to_string(m.rows()));
  return simplify(det_recursive(m));
}

ExprMatrix adjugate(const ExprMatrix& m) {
  if (m.rows() != m.cols()) throw std::invalid_argument("adjugate: matrix is not square");
  const int n = m.rows();
  ExprMatrix adj(n, n);
  if (n == 1) {
    adj.at(0, 0) = Expr::constant(1.0);
    return adj;
  }
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      Expr cof = simplify(det_recursive(minor_matrix(m, j, i)));
      adj.at(i, j) = ((i + j) % 2 != 0) ? simplify(-cof) : cof;
    }
  }
  return adj;
}

InfinitesimalCoeffs infinitesimal_coeffs(const ExprMatrix& jg, int k) {
  if (jg.rows() + 1 != jg.cols())
    throw std::invalid_argument("infinitesimal_coeffs: expected an (N-1) x N matrix");
  const int n = jg.cols();
  ExprMatrix sk = constraint_matrix(jg, k);
  Expr det_sk = determinant(sk);
  ExprMatrix adj = adjugate(sk);

  InfinitesimalCoeffs coeffs;
  coeffs.axis = k;
  coeffs.denominator = det_sk;
  coeffs.numerators.resize(static_cast<std::size_t>(n));
  coeffs.numerators[static_cast<std::size_t>(k)] = det_sk;  // s_{k,k} = 1

  // reduced row r corresponds to variable r if r < k else r + 1
  for (int r = 0; r < n - 1; ++r) {
    Expr acc;
    bool have = false;
    for (int l = 0; l < n - 1; ++l) {
      const Expr& a = adj.at(r, l);
      const Expr& gcol = jg.at(l, k);
      if (a.is_constant(0.0) || gcol.is_constant(0.0)) continue;
      Expr t = a * gcol;
      acc = have ? acc + t : t;
      have = true;
    }
    int var = r < k ? r : r + 1;
    coeffs.numerators[static_cast<std::size_t>(var)] =
        have ? simplify(-acc) : Expr::constant(0.0);
  }
  return coeffs;
}

double InfinitesimalCoeffs::eval_coeff(int i, const Point& p) const {
  double den = evaluate(denominator, p);
  if (den == 0.0) throw EvalDomainError("div", p);
  return evaluate(numerators[static_cast<std::size_t>(i)], p) / den;
}

}  // namespace ceqopt
