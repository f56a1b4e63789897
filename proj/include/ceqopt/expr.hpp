#pragma once

#include <cstddef>
#include <memory>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace ceqopt {

/// Coordinates of a candidate or solution point, length = number of variables.
using Point = std::vector<double>;

enum class ExprKind { Constant, Variable, Negate, Add, Sub, Mul, Div, Pow, Func };

enum class FuncId { Sin, Cos, Tan, Exp, Log, Sqrt };

const char* func_name(FuncId f);

/// Immutable expression tree with structural sharing. Copies are cheap
/// (shared_ptr); nodes are never mutated after construction, so Exprs can be
/// shared freely across threads.
class Expr {
 public:
  struct Node;

  Expr();  // constant 0

  static Expr constant(double value);
  static Expr variable(int index);
  static Expr apply(FuncId f, const Expr& child);
  static Expr pow(const Expr& base, const Expr& exponent);

  Expr operator-() const;
  friend Expr operator+(const Expr& a, const Expr& b);
  friend Expr operator-(const Expr& a, const Expr& b);
  friend Expr operator*(const Expr& a, const Expr& b);
  friend Expr operator/(const Expr& a, const Expr& b);

  ExprKind kind() const;
  double constant_value() const;
  int variable_index() const;
  FuncId func() const;
  int child_count() const;
  const Expr& child(int i) const;

  bool is_constant() const { return kind() == ExprKind::Constant; }
  bool is_constant(double v) const;

  bool structurally_equal(const Expr& other) const;
  std::size_t structural_hash() const;

  /// Number of distinct nodes in the underlying DAG.
  std::size_t node_count() const;

  const Node* raw() const { return node_.get(); }

 private:
  explicit Expr(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  std::shared_ptr<const Node> node_;
  friend struct ExprBuilder;
};

struct Expr::Node {
  ExprKind kind;
  double value = 0.0;     // Constant
  int var = -1;           // Variable
  FuncId fn = FuncId::Sin;
  std::vector<Expr> kids;
  std::size_t hash = 0;
};

/// Parse failure; offset is the byte position in the input text.
class ParseError : public std::runtime_error {
 public:
  ParseError(std::string message, std::size_t offset);
  std::size_t offset() const { return offset_; }

 private:
  std::size_t offset_;
};

class UnknownIdentifierError : public ParseError {
 public:
  UnknownIdentifierError(std::string identifier, std::size_t offset);
  const std::string& identifier() const { return identifier_; }

 private:
  std::string identifier_;
};

/// Evaluation hit a point outside the domain of some subexpression
/// (log of a non-positive value, sqrt of a negative, division by zero,
/// fractional power of a negative base).
class EvalDomainError : public std::runtime_error {
 public:
  EvalDomainError(std::string op_kind, Point at);
  const std::string& op_kind() const { return op_kind_; }
  const Point& at() const { return at_; }

 private:
  std::string op_kind_;
  Point at_;
};

class SizeGuardError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Grammar:
///   expr  := term (('+'|'-') term)*
///   term  := unary (('*'|'/') unary)*
///   unary := '-' unary | power
///   power := atom ('^' unary)?
///   atom  := NUMBER | IDENT | IDENT '(' expr ')' | '(' expr ')'
/// Identifiers must be a declared variable, a function name, or pi / e.
Expr parse(std::string_view text, const std::vector<std::string>& variables);

double evaluate(const Expr& e, const Point& p);

/// Exact symbolic partial derivative with respect to variable `var`,
/// simplified.
Expr differentiate(const Expr& e, int var);

/// Constant folding, 0/1 identities, double-negation removal, to fixpoint.
Expr simplify(const Expr& e);

Expr substitute(const Expr& e, int var, const Expr& replacement);

/// Canonical printer; parse(to_string(simplify(e))) == simplify(e).
std::string to_string(const Expr& e, const std::vector<std::string>& variables);

/// Shortest decimal form that round-trips to the same double.
std::string format_double(double v);

namespace detail {
// Shared power semantics: integer exponents use std::pow directly (valid for
// negative bases), fractional exponents require a positive base. Returns the
// value; *err is set to the failing op name or left untouched.
double eval_pow(double base, double exponent, const char** err);
bool is_integer_valued(double v);
}  // namespace detail

}  // namespace ceqopt
