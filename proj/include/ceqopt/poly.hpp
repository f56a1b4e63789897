#pragma once

#include <map>
#include <optional>
#include <vector>

#include "ceqopt/expr.hpp"

namespace ceqopt {

/// Sparse multivariate polynomial, exponent vector -> coefficient.
/// std::map keeps term order deterministic.
class MultiPoly {
 public:
  using Monomial = std::vector<int>;

  explicit MultiPoly(int nvars) : nvars_(nvars) {}
  static MultiPoly constant(int nvars, double c);
  static MultiPoly variable(int nvars, int index);

  int nvars() const { return nvars_; }
  bool is_zero() const { return terms_.empty(); }
  bool is_constant() const;
  double constant_value() const;  // 0 when zero
  int term_count() const { return static_cast<int>(terms_.size()); }
  const std::map<Monomial, double>& terms() const { return terms_; }

  MultiPoly& operator+=(const MultiPoly& o);
  MultiPoly& operator-=(const MultiPoly& o);
  friend MultiPoly operator+(MultiPoly a, const MultiPoly& b) { return a += b; }
  friend MultiPoly operator-(MultiPoly a, const MultiPoly& b) { return a -= b; }
  friend MultiPoly operator*(const MultiPoly& a, const MultiPoly& b);
  MultiPoly operator-() const;
  MultiPoly scaled(double s) const;
  MultiPoly pow(int exponent) const;  // exponent >= 0
  MultiPoly derivative(int var) const;

  double evaluate(const Point& p) const;
  Expr to_expr() const;

  /// Conversion succeeds for +,-,*,unary -, pow with integer constant
  /// exponent >= 0, and division by a nonzero constant.
  static std::optional<MultiPoly> from_expr(const Expr& e, int nvars);

  /// Exact multivariate division; nullopt when den does not divide num.
  static std::optional<MultiPoly> divide_exact(const MultiPoly& num, const MultiPoly& den);

  void add_term(Monomial m, double coeff);
  double max_abs_coeff() const;

 private:
  int nvars_;
  std::map<Monomial, double> terms_;
  void prune();
};

/// num/den with den kept separate so removable factors can be divided out.
struct RationalPoly {
  MultiPoly num;
  MultiPoly den;
};

/// Rewrites an Expr as a single polynomial fraction; handles div and pow
/// with negative integer constant exponents. nullopt for function nodes or
/// non-integer exponents.
std::optional<RationalPoly> rational_from_expr(const Expr& e, int nvars);

/// Divides out the full denominator when possible, otherwise removes common
/// monomial / integer content; normalizes the denominator's leading sign.
RationalPoly cancel_rational(RationalPoly r);

Expr rational_to_expr(const RationalPoly& r);

}  // namespace ceqopt
