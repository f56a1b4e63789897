#include <doctest.h>

#include <cmath>

#include "ceqopt/matrix.hpp"
#include "helpers.hpp"

using namespace ceqopt;
using testutil::example_1a;
using testutil::example_1b;
using testutil::example_2;

namespace {

bool matrix_matches(const ExprMatrix& m, const std::vector<std::vector<const char*>>& expected,
                    const std::vector<std::string>& vars) {
  if (m.rows() != static_cast<int>(expected.size())) return false;
  for (int r = 0; r < m.rows(); ++r) {
    if (m.cols() != static_cast<int>(expected[static_cast<std::size_t>(r)].size())) return false;
    for (int c = 0; c < m.cols(); ++c) {
      Expr want = parse(expected[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)], vars);
      if (!testutil::numerically_equal(m.at(r, c), want, static_cast<int>(vars.size())))
        return false;
    }
  }
  return true;
}

}  // namespace

TEST_CASE("problem jacobian stacks grad f over the constraint gradients") {
  Problem p = example_1a();
  ExprMatrix j = problem_jacobian(p.objective, p.constraint_exprs(), 2);
  CHECK(matrix_matches(j, {{"2*x", "4*y"}, {"1", "-2*y"}}, p.variables));

  Problem q = example_2();
  ExprMatrix j2 = problem_jacobian(q.objective, q.constraint_exprs(), 3);
  CHECK(matrix_matches(j2,
                       {{"2*x", "-2", "3*z^2"}, {"2*x", "1", "1"}, {"0", "1", "-2*z"}},
                       q.variables));

  // unconstrained 1D degenerates to the plain derivative
  ExprMatrix j1 = problem_jacobian(parse("x^3", {"x"}), {}, 1);
  CHECK(j1.rows() == 1);
  CHECK(testutil::numerically_equal(j1.at(0, 0), parse("3*x^2", {"x"}), 1));

  CHECK_THROWS_AS(problem_jacobian(p.objective, {}, 2), std::invalid_argument);
}

TEST_CASE("constraint jacobian") {
  Problem p = example_1a();
  ExprMatrix jg = constraint_jacobian(p.constraint_exprs(), 2);
  CHECK(matrix_matches(jg, {{"1", "-2*y"}}, p.variables));

  Problem q = example_2();
  ExprMatrix jg2 = constraint_jacobian(q.constraint_exprs(), 3);
  CHECK(matrix_matches(jg2, {{"2*x", "1", "1"}, {"0", "1", "-2*z"}}, q.variables));

  std::vector<std::string> vars = {"x", "y"};
  ExprMatrix lin = constraint_jacobian({parse("x + y", vars)}, 2);
  CHECK(matrix_matches(lin, {{"1", "1"}}, vars));
}

TEST_CASE("constraint matrix deletes one column") {
  Problem q = example_2();
  ExprMatrix jg = constraint_jacobian(q.constraint_exprs(), 3);
  CHECK(matrix_matches(constraint_matrix(jg, 0), {{"1", "1"}, {"1", "-2*z"}}, q.variables));
  CHECK(matrix_matches(constraint_matrix(jg, 2), {{"2*x", "1"}, {"0", "1"}}, q.variables));

  Problem p = example_1a();
  ExprMatrix jg1 = constraint_jacobian(p.constraint_exprs(), 2);
  CHECK(matrix_matches(constraint_matrix(jg1, 0), {{"-2*y"}}, p.variables));
}

TEST_CASE("determinant of example 1a equals -4xy - 4y") {
  Problem p = example_1a();
  Expr det = determinant(problem_jacobian(p.objective, p.constraint_exprs(), 2));
  Expr expected = parse("-4*x*y - 4*y", p.variables);
  CHECK(testutil::numerically_equal(det, expected, 2, 1e-9, 100));
}

TEST_CASE("determinant of constants folds") {
  ExprMatrix id(2, 2);
  id.at(0, 0) = Expr::constant(1.0);
  id.at(1, 1) = Expr::constant(1.0);
  id.at(0, 1) = Expr::constant(0.0);
  id.at(1, 0) = Expr::constant(0.0);
  CHECK(determinant(id).is_constant(1.0));
}

TEST_CASE("determinant matches the numeric LU oracle on example 2") {
  Problem q = example_2();
  ExprMatrix j = problem_jacobian(q.objective, q.constraint_exprs(), 3);
  Expr det = determinant(j);
  CHECK(testutil::numerically_equal(det, parse("6*x*(z - 2)*z - 2*x", q.variables), 3));
  std::mt19937_64 rng(11);
  for (int i = 0; i < 100; ++i) {
    Point p = testutil::random_point(rng, 3, -3.0, 3.0);
    double sym = evaluate(det, p);
    double lu = testutil::lu_determinant(j, p);
    CHECK(std::abs(sym - lu) <= 1e-9 * (1.0 + std::abs(lu)));
  }
}

TEST_CASE("determinant guards") {
  ExprMatrix rect(2, 3);
  CHECK_THROWS_AS(determinant(rect), std::invalid_argument);

  ExprMatrix big(9, 9);
  for (int i = 0; i < 9; ++i) big.at(i, i) = Expr::constant(1.0);
  CHECK_THROWS_AS(determinant(big), SizeGuardError);

  ExprMatrix cap(8, 8);
  for (int i = 0; i < 8; ++i) cap.at(i, i) = Expr::constant(1.0);
  CHECK(determinant(cap).is_constant(1.0));
}

TEST_CASE("adjugate satisfies M * adj(M) = det(M) * I") {
  Problem q = example_2();
  ExprMatrix jg = constraint_jacobian(q.constraint_exprs(), 3);
  ExprMatrix sk = constraint_matrix(jg, 0);
  ExprMatrix adj = adjugate(sk);
  Expr det = determinant(sk);
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    Point p = testutil::random_point(rng, 3, -2.0, 2.0);
    double d = evaluate(det, p);
    for (int i = 0; i < 2; ++i) {
      for (int j = 0; j < 2; ++j) {
        double sum = 0.0;
        for (int l = 0; l < 2; ++l)
          sum += evaluate(sk.at(i, l), p) * evaluate(adj.at(l, j), p);
        CHECK(sum == doctest::Approx(i == j ? d : 0.0).epsilon(1e-12).scale(1.0 + std::abs(d)));
      }
    }
  }
}

TEST_CASE("infinitesimal coefficients reproduce the worked linkages") {
  // dy = dx / (2y) on the parabola x - y^2 = 1
  Problem p = example_1a();
  InfinitesimalCoeffs cx = infinitesimal_coeffs(constraint_jacobian(p.constraint_exprs(), 2), 0);
  CHECK(cx.axis == 0);
  for (double y : {0.5, -1.0, 2.0, 0.3}) {
    Point at = {1.0 + y * y, y};
    CHECK(cx.eval_coeff(1, at) == doctest::Approx(1.0 / (2.0 * y)).epsilon(1e-12));
    CHECK(cx.eval_coeff(0, at) == 1.0);  // s_{k,k} = 1
  }

  // dx = -(1/(2x) + z/x) dz and dy = 2z dz
  Problem q = example_2();
  InfinitesimalCoeffs cz = infinitesimal_coeffs(constraint_jacobian(q.constraint_exprs(), 3), 2);
  std::mt19937_64 rng(3);
  for (int i = 0; i < 20; ++i) {
    Point at = testutil::random_point(rng, 3, 0.2, 2.0);
    double x = at[0], z = at[2];
    CHECK(cz.eval_coeff(1, at) == doctest::Approx(2.0 * z).epsilon(1e-11));
    CHECK(cz.eval_coeff(0, at) ==
          doctest::Approx(-(1.0 / (2.0 * x) + z / x)).epsilon(1e-11));
    CHECK(cz.eval_coeff(2, at) == 1.0);
  }
}

TEST_CASE("reciprocity, chain rule, and the defining linear system") {
  for (const Problem& p : {example_1a(), example_1b(), example_2()}) {
    const int n = p.dimension();
    ExprMatrix jg = constraint_jacobian(p.constraint_exprs(), n);
    std::vector<InfinitesimalCoeffs> coeffs;
    std::vector<ExprMatrix> s;
    for (int k = 0; k < n; ++k) {
      coeffs.push_back(infinitesimal_coeffs(jg, k));
      s.push_back(constraint_matrix(jg, k));
    }

    std::mt19937_64 rng(1234);
    int checked = 0;
    while (checked < 100) {
      Point at = testutil::random_point(rng, n, -2.5, 2.5);
      std::vector<double> dens(static_cast<std::size_t>(n));
      bool ok = true;
      for (int k = 0; k < n; ++k) {
        dens[static_cast<std::size_t>(k)] = evaluate(coeffs[static_cast<std::size_t>(k)].denominator, at);
        if (std::abs(dens[static_cast<std::size_t>(k)]) < 1e-3) ok = false;
      }
      if (!ok) continue;
      ++checked;

      auto sval = [&](int i, int k) {
        return coeffs[static_cast<std::size_t>(k)].eval_coeff(i, at);
      };
      for (int i = 0; i < n; ++i) {
        for (int k = 0; k < n; ++k) {
          if (i == k) continue;
          double prod = sval(i, k) * sval(k, i);
          CHECK(std::abs(prod - 1.0) <= 1e-9 * (1.0 + std::abs(prod)));
          for (int j = 0; j < n; ++j) {
            double lhs = sval(i, j);
            double rhs = sval(i, k) * sval(k, j);
            CHECK(std::abs(lhs - rhs) <= 1e-9 * (1.0 + std::abs(lhs)));
          }
        }
      }

      // column_k(Jg) + S_k * [s_{i,k}] = 0
      for (int k = 0; k < n; ++k) {
        for (int row = 0; row < n - 1; ++row) {
          double acc = evaluate(jg.at(row, k), at);
          int cc = 0;
          for (int i = 0; i < n; ++i) {
            if (i == k) continue;
            acc += evaluate(s[static_cast<std::size_t>(k)].at(row, cc), at) * sval(i, k);
            ++cc;
          }
          CHECK(std::abs(acc) <= 1e-10);
        }
      }
    }
  }
}
