#include "ceqopt/expr.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <unordered_map>
#include <unordered_set>

namespace ceqopt {

namespace {

std::size_t hash_combine(std::size_t seed, std::size_t v) {
  return seed ^ (v + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2));
}

std::size_t hash_double(double v) {
  std::uint64_t bits;
  static_assert(sizeof(bits) == sizeof(v));
  std::memcpy(&bits, &v, sizeof(bits));
  return std::hash<std::uint64_t>{}(bits);
}

}  // namespace

const char* func_name(FuncId f) {
  switch (f) {
    case FuncId::Sin: return "sin";
    case FuncId::Cos: return "cos";
    case FuncId::Tan: return "tan";
    case FuncId::Exp: return "exp";
    case FuncId::Log: return "log";
    case FuncId::Sqrt: return "sqrt";
  }
  return "?";
}

struct ExprBuilder {
  static Expr make(Expr::Node node) {
    std::size_t h = static_cast<std::size_t>(node.kind) * 1469598103934665603ULL;
    switch (node.kind) {
      case ExprKind::Constant: h = hash_combine(h, hash_double(node.value)); break;
      case ExprKind::Variable: h = hash_combine(h, static_cast<std::size_t>(node.var)); break;
      case ExprKind::Func: h = hash_combine(h, static_cast<std::size_t>(node.fn)); break;
      default: break;
    }
    for (const Expr& k : node.kids) h = hash_combine(h, k.structural_hash());
    node.hash = h;
    return Expr(std::make_shared<const Expr::Node>(std::move(node)));
  }
};

Expr::Expr() { *this = constant(0.0); }

Expr Expr::constant(double value) {
  Node n;
  n.kind = ExprKind::Constant;
  n.value = value;
  return ExprBuilder::make(std::move(n));
}

Expr Expr::variable(int index) {
  Node n;
  n.kind = ExprKind::Variable;
  n.var = index;
  return ExprBuilder::make(std::move(n));
}

Expr Expr::apply(FuncId f, const Expr& child) {
  Node n;
  n.kind = ExprKind::Func;
  n.fn = f;
  n.kids = {child};
  return ExprBuilder::make(std::move(n));
}

Expr Expr::pow(const Expr& base, const Expr& exponent) {
  Node n;
  n.kind = ExprKind::Pow;
  n.kids = {base, exponent};
  return ExprBuilder::make(std::move(n));
}

Expr Expr::operator-() const {
  Node n;
  n.kind = ExprKind::Negate;
  n.kids = {*this};
  return ExprBuilder::make(std::move(n));
}

static Expr make_binary(ExprKind kind, const Expr& a, const Expr& b) {
  Expr::Node n;
  n.kind = kind;
  n.kids = {a, b};
  return ExprBuilder::make(std::move(n));
}

Expr operator+(const Expr& a, const Expr& b) { return make_binary(ExprKind::Add, a, b); }
Expr operator-(const Expr& a, const Expr& b) { return make_binary(ExprKind::Sub, a, b); }
Expr operator*(const Expr& a, const Expr& b) { return make_binary(ExprKind::Mul, a, b); }
Expr operator/(const Expr& a, const Expr& b) { return make_binary(ExprKind::Div, a, b); }

ExprKind Expr::kind() const { return node_->kind; }
double Expr::constant_value() const { return node_->value; }
int Expr::variable_index() const { return node_->var; }
FuncId Expr::func() const { return node_->fn; }
int Expr::child_count() const { return static_cast<int>(node_->kids.size()); }
const Expr& Expr::child(int i) const { return node_->kids[static_cast<std::size_t>(i)]; }
std::size_t Expr::structural_hash() const { return node_->hash; }

bool Expr::is_constant(double v) const {
  return kind() == ExprKind::Constant && constant_value() == v;
}

bool Expr::structurally_equal(const Expr& other) const {
  const Node* a = node_.get();
  const Node* b = other.node_.get();
  if (a == b) return true;
  if (a->hash != b->hash || a->kind != b->kind) return false;
  switch (a->kind) {
    case ExprKind::Constant:
      return std::memcmp(&a->value, &b->value, sizeof(double)) == 0;
    case ExprKind::Variable:
      return a->var == b->var;
    case ExprKind::Func:
      if (a->fn != b->fn) return false;
      break;
    default:
      break;
  }
  if (a->kids.size() != b->kids.size()) return false;
  for (std::size_t i = 0; i < a->kids.size(); ++i)
    if (!a->kids[i].structurally_equal(b->kids[i])) return false;
  return true;
}

std::size_t Expr::node_count() const {
  std::unordered_set<const Node*> seen;
  std::vector<const Node*> stack{node_.get()};
  while (!stack.empty()) {
    const Node* n = stack.back();
    stack.pop_back();
    if (!seen.insert(n).second) continue;
    for (const Expr& k : n->kids) stack.push_back(k.raw());
  }
  return seen.size();
}

ParseError::ParseError(std::string message, std::size_t offset)
    : std::runtime_error(message + " (at byte " + std::to_string(offset) + ")"),
      offset_(offset) {}

UnknownIdentifierError::UnknownIdentifierError(std::string identifier, std::size_t offset)
    : ParseError("unknown identifier '" + identifier + "'", offset),
      identifier_(std::move(identifier)) {}

EvalDomainError::EvalDomainError(std::string op_kind, Point at)
    : std::runtime_error("domain error in '" + op_kind + "'"),
      op_kind_(std::move(op_kind)),
      at_(std::move(at)) {}

namespace detail {

bool is_integer_valued(double v) {
  return std::isfinite(v) && v == std::nearbyint(v) && std::abs(v) < 9.0e15;
}

double eval_pow(double base, double exponent, const char** err) {
  if (is_integer_valued(exponent)) {
    if (base == 0.0 && exponent < 0.0) {
      *err = "pow";
      return 0.0;
    }
    return std::pow(base, exponent);
  }
  if (base < 0.0) {
    *err = "pow";
    return 0.0;
  }
  if (base == 0.0) {
    if (exponent > 0.0) return 0.0;
    *err = "pow";
    return 0.0;
  }
  return std::pow(base, exponent);
}

}  // namespace detail

// ---------------------------------------------------------------------------
// evaluate

namespace {

double eval_node(const Expr::Node* n, const Point& p,
                 std::unordered_map<const Expr::Node*, double>& memo) {
  auto it = memo.find(n);
  if (it != memo.end()) return it->second;
  const char* err = nullptr;
  double r = 0.0;
  switch (n->kind) {
    case ExprKind::Constant:
      r = n->value;
      break;
    case ExprKind::Variable:
      if (n->var < 0 || static_cast<std::size_t>(n->var) >= p.size())
        throw std::out_of_range("variable index out of range for point");
      r = p[static_cast<std::size_t>(n->var)];
      break;
    case ExprKind::Negate:
      r = -eval_node(n->kids[0].raw(), p, memo);
      break;
    case ExprKind::Add:
      r = eval_node(n->kids[0].raw(), p, memo) + eval_node(n->kids[1].raw(), p, memo);
      break;
    case ExprKind::Sub:
      r = eval_node(n->kids[0].raw(), p, memo) - eval_node(n->kids[1].raw(), p, memo);
      break;
    case ExprKind::Mul:
      r = eval_node(n->kids[0].raw(), p, memo) * eval_node(n->kids[1].raw(), p, memo);
      break;
    case ExprKind::Div: {
      double a = eval_node(n->kids[0].raw(), p, memo);
      double b = eval_node(n->kids[1].raw(), p, memo);
      if (b == 0.0) err = "div";
      r = a / b;
      break;
    }
    case ExprKind::Pow: {
      double a = eval_node(n->kids[0].raw(), p, memo);
      double b = eval_node(n->kids[1].raw(), p, memo);
      r = detail::eval_pow(a, b, &err);
      break;
    }
    case ExprKind::Func: {
      double a = eval_node(n->kids[0].raw(), p, memo);
      switch (n->fn) {
        case FuncId::Sin: r = std::sin(a); break;
        case FuncId::Cos: r = std::cos(a); break;
        case FuncId::Tan: r = std::tan(a); break;
        case FuncId::Exp: r = std::exp(a); break;
        case FuncId::Log:
          if (a <= 0.0) err = "log";
          r = std::log(a);
          break;
        case FuncId::Sqrt:
          if (a < 0.0) err = "sqrt";
          r = std::sqrt(a);
          break;
      }
      break;
    }
  }
  if (err) throw EvalDomainError(err, p);
  memo.emplace(n, r);
  return r;
}

}  // namespace

double evaluate(const Expr& e, const Point& p) {
  std::unordered_map<const Expr::Node*, double> memo;
  return eval_node(e.raw(), p, memo);
}

// ---------------------------------------------------------------------------
// simplify

namespace {

// Constant-fold a node whose children are all constants. Returns false if the
// fold would hit a domain error (the node is kept unfolded; the error
// surfaces at evaluation time instead).
bool fold_constant(const Expr::Node* n, double* out) {
  const char* err = nullptr;
  auto c = [&](int i) { return n->kids[static_cast<std::size_t>(i)].constant_value(); };
  switch (n->kind) {
    case ExprKind::Negate: *out = -c(0); return true;
    case ExprKind::Add: *out = c(0) + c(1); return true;
    case ExprKind::Sub: *out = c(0) - c(1); return true;
    case ExprKind::Mul: *out = c(0) * c(1); return true;
    case ExprKind::Div:
      if (c(1) == 0.0) return false;
      *out = c(0) / c(1);
      return true;
    case ExprKind::Pow:
      *out = detail::eval_pow(c(0), c(1), &err);
      return err == nullptr;
    case ExprKind::Func: {
      double a = c(0);
      switch (n->fn) {
        case FuncId::Sin: *out = std::sin(a); return true;
        case FuncId::Cos: *out = std::cos(a); return true;
        case FuncId::Tan: *out = std::tan(a); return true;
        case FuncId::Exp: *out = std::exp(a); return true;
        case FuncId::Log:
          if (a <= 0.0) return false;
          *out = std::log(a);
          return true;
        case FuncId::Sqrt:
          if (a < 0.0) return false;
          *out = std::sqrt(a);
          return true;
      }
      return false;
    }
    default:
      return false;
  }
}

Expr simplify_node(const Expr& e, std::unordered_map<const Expr::Node*, Expr>& memo) {
  auto it = memo.find(e.raw());
  if (it != memo.end()) return it->second;

  Expr result = e;
  ExprKind k = e.kind();
  if (k != ExprKind::Constant && k != ExprKind::Variable) {
    std::vector<Expr> kids;
    kids.reserve(static_cast<std::size_t>(e.child_count()));
    bool changed = false;
    for (int i = 0; i < e.child_count(); ++i) {
      Expr s = simplify_node(e.child(i), memo);
      if (s.raw() != e.child(i).raw()) changed = true;
      kids.push_back(std::move(s));
    }

    auto rebuilt = [&]() -> Expr {
      if (!changed) return e;
      switch (k) {
        case ExprKind::Negate: return -kids[0];
        case ExprKind::Add: return kids[0] + kids[1];
        case ExprKind::Sub: return kids[0] - kids[1];
        case ExprKind::Mul: return kids[0] * kids[1];
        case ExprKind::Div: return kids[0] / kids[1];
        case ExprKind::Pow: return Expr::pow(kids[0], kids[1]);
        case ExprKind::Func: return Expr::apply(e.func(), kids[0]);
        default: return e;
      }
    };

    bool all_const = true;
    for (const Expr& kid : kids)
      if (!kid.is_constant()) { all_const = false; break; }

    result = rebuilt();
    if (all_const) {
      double v = 0.0;
      if (fold_constant(result.raw(), &v)) result = Expr::constant(v);
    }

    if (!result.is_constant()) {
      switch (k) {
        case ExprKind::Add:
          if (kids[0].is_constant(0.0)) result = kids[1];
          else if (kids[1].is_constant(0.0)) result = kids[0];
          break;
        case ExprKind::Sub:
          if (kids[1].is_constant(0.0)) result = kids[0];
          else if (kids[0].is_constant(0.0)) result = simplify_node(-kids[1], memo);
          break;
        case ExprKind::Mul:
          if (kids[0].is_constant(0.0) || kids[1].is_constant(0.0)) result = Expr::constant(0.0);
          else if (kids[0].is_constant(1.0)) result = kids[1];
          else if (kids[1].is_constant(1.0)) result = kids[0];
          break;
        case ExprKind::Div:
          if (kids[1].is_constant(1.0)) result = kids[0];
          else if (kids[0].is_constant(0.0) && !kids[1].is_constant(0.0))
            result = Expr::constant(0.0);
          break;
        case ExprKind::Pow:
          if (kids[1].is_constant(1.0)) result = kids[0];
          else if (kids[1].is_constant(0.0)) result = Expr::constant(1.0);
          break;
        case ExprKind::Negate:
          if (kids[0].kind() == ExprKind::Negate) result = kids[0].child(0);
          else if (kids[0].is_constant()) result = Expr::constant(-kids[0].constant_value());
          break;
        default:
          break;
      }
    }
  }

  memo.emplace(e.raw(), result);
  return result;
}

}  // namespace

Expr simplify(const Expr& e) {
  std::unordered_map<const Expr::Node*, Expr> memo;
  return simplify_node(e, memo);
}

// ---------------------------------------------------------------------------
// differentiate

namespace {

Expr diff_node(const Expr& e, int var, std::unordered_map<const Expr::Node*, Expr>& memo) {
  auto it = memo.find(e.raw());
  if (it != memo.end()) return it->second;

  Expr d;
  switch (e.kind()) {
    case ExprKind::Constant:
      d = Expr::constant(0.0);
      break;
    case ExprKind::Variable:
      d = Expr::constant(e.variable_index() == var ? 1.0 : 0.0);
      break;
    case ExprKind::Negate:
      d = -diff_node(e.child(0), var, memo);
      break;
    case ExprKind::Add:
      d = diff_node(e.child(0), var, memo) + diff_node(e.child(1), var, memo);
      break;
    case ExprKind::Sub:
      d = diff_node(e.child(0), var, memo) - diff_node(e.child(1), var, memo);
      break;
    case ExprKind::Mul: {
      const Expr& u = e.child(0);
      const Expr& v = e.child(1);
      d = diff_node(u, var, memo) * v + u * diff_node(v, var, memo);
      break;
    }
    case ExprKind::Div: {
      const Expr& u = e.child(0);
      const Expr& v = e.child(1);
      d = (diff_node(u, var, memo) * v - u * diff_node(v, var, memo)) /
          Expr::pow(v, Expr::constant(2.0));
      break;
    }
    case ExprKind::Pow: {
      const Expr& u = e.child(0);
      const Expr& v = e.child(1);
      Expr du = diff_node(u, var, memo);
      if (v.is_constant()) {
        double c = v.constant_value();
        d = Expr::constant(c) * Expr::pow(u, Expr::constant(c - 1.0)) * du;
      } else {
        // u^v = exp(v log u)
        Expr dv = diff_node(v, var, memo);
        d = e * (dv * Expr::apply(FuncId::Log, u) + v * du / u);
      }
      break;
    }
    case ExprKind::Func: {
      const Expr& u = e.child(0);
      Expr du = diff_node(u, var, memo);
      Expr outer;
      switch (e.func()) {
        case FuncId::Sin: outer = Expr::apply(FuncId::Cos, u); break;
        case FuncId::Cos: outer = -Expr::apply(FuncId::Sin, u); break;
        case FuncId::Tan:
          outer = Expr::constant(1.0) /
                  Expr::pow(Expr::apply(FuncId::Cos, u), Expr::constant(2.0));
          break;
        case FuncId::Exp: outer = e; break;
        case FuncId::Log: outer = Expr::constant(1.0) / u; break;
        case FuncId::Sqrt:
          outer = Expr::constant(1.0) / (Expr::constant(2.0) * e);
          break;
      }
      d = outer * du;
      break;
    }
  }
  memo.emplace(e.raw(), d);
  return d;
}

}  // namespace

Expr differentiate(const Expr& e, int var) {
  std::unordered_map<const Expr::Node*, Expr> memo;
  return simplify(diff_node(e, var, memo));
}

// ---------------------------------------------------------------------------
// substitute

namespace {

Expr subst_node(const Expr& e, int var, const Expr& replacement,
                std::unordered_map<const Expr::Node*, Expr>& memo) {
  auto it = memo.find(e.raw());
  if (it != memo.end()) return it->second;
  Expr r = e;
  switch (e.kind()) {
    case ExprKind::Constant:
      break;
    case ExprKind::Variable:
      if (e.variable_index() == var) r = replacement;
      break;
    default: {
      std::vector<Expr> kids;
      bool changed = false;
      for (int i = 0; i < e.child_count(); ++i) {
        Expr s = subst_node(e.child(i), var, replacement, memo);
        if (s.raw() != e.child(i).raw()) changed = true;
        kids.push_back(std::move(s));
      }
      if (changed) {
        switch (e.kind()) {
          case ExprKind::Negate: r = -kids[0]; break;
          case ExprKind::Add: r = kids[0] + kids[1]; break;
          case ExprKind::Sub: r = kids[0] - kids[1]; break;
          case ExprKind::Mul: r = kids[0] * kids[1]; break;
          case ExprKind::Div: r = kids[0] / kids[1]; break;
          case ExprKind::Pow: r = Expr::pow(kids[0], kids[1]); break;
          case ExprKind::Func: r = Expr::apply(e.func(), kids[0]); break;
          default: break;
        }
      }
    }
  }
  memo.emplace(e.raw(), r);
  return r;
}

}  // namespace

Expr substitute(const Expr& e, int var, const Expr& replacement) {
  std::unordered_map<const Expr::Node*, Expr> memo;
  return subst_node(e, var, replacement, memo);
}

// ---------------------------------------------------------------------------
// parser

namespace {

struct Lexer {
  std::string_view text;
  std::size_t pos = 0;

  void skip_ws() {
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
  }

  char peek() {
    skip_ws();
    return pos < text.size() ? text[pos] : '\0';
  }
};

struct Parser {
  Lexer lex;
  const std::vector<std::string>& vars;

  Expr parse_expr() {
    Expr e = parse_term();
    for (;;) {
      char c = lex.peek();
      if (c == '+' || c == '-') {
        ++lex.pos;
        Expr rhs = parse_term();
        e = (c == '+') ? e + rhs : e - rhs;
      } else {
        return e;
      }
    }
  }

  Expr parse_term() {
    Expr e = parse_unary();
    for (;;) {
      char c = lex.peek();
      if (c == '*' || c == '/') {
        ++lex.pos;
        Expr rhs = parse_unary();
        e = (c == '*') ? e * rhs : e / rhs;
      } else {
        return e;
      }
    }
  }

  Expr parse_unary() {
    if (lex.peek() == '-') {
      ++lex.pos;
      Expr inner = parse_unary();
      // fold '-' applied to a literal so negative constants round-trip
      if (inner.is_constant()) return Expr::constant(-inner.constant_value());
      return -inner;
    }
    return parse_power();
  }

  Expr parse_power() {
    Expr base = parse_atom();
    if (lex.peek() == '^') {
      ++lex.pos;
      Expr expo = parse_unary();
      return Expr::pow(base, expo);
    }
    return base;
  }

  Expr parse_atom() {
    char c = lex.peek();
    std::size_t at = lex.pos;
    if (c == '(') {
      ++lex.pos;
      Expr e = parse_expr();
      if (lex.peek() != ')') throw ParseError("expected ')'", lex.pos);
      ++lex.pos;
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return parse_number();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::string ident = parse_ident();
      if (lex.peek() == '(') {
        ++lex.pos;
        FuncId f;
        if (ident == "sin") f = FuncId::Sin;
        else if (ident == "cos") f = FuncId::Cos;
        else if (ident == "tan") f = FuncId::Tan;
        else if (ident == "exp") f = FuncId::Exp;
        else if (ident == "log") f = FuncId::Log;
        else if (ident == "sqrt") f = FuncId::Sqrt;
        else throw UnknownIdentifierError(ident, at);
        Expr arg = parse_expr();
        if (lex.peek() != ')') throw ParseError("expected ')'", lex.pos);
        ++lex.pos;
        return Expr::apply(f, arg);
      }
      for (std::size_t i = 0; i < vars.size(); ++i)
        if (vars[i] == ident) return Expr::variable(static_cast<int>(i));
      if (ident == "pi") return Expr::constant(3.14159265358979323846);
      if (ident == "e") return Expr::constant(2.71828182845904523536);
      throw UnknownIdentifierError(ident, at);
    }
    if (c == '\0') throw ParseError("unexpected end of expression", lex.pos);
    throw ParseError(std::string("unexpected character '") + c + "'", lex.pos);
  }

  std::string parse_ident() {
    std::size_t start = lex.pos;
    while (lex.pos < lex.text.size() &&
           (std::isalnum(static_cast<unsigned char>(lex.text[lex.pos])) ||
            lex.text[lex.pos] == '_'))
      ++lex.pos;
    return std::string(lex.text.substr(start, lex.pos - start));
  }

  Expr parse_number() {
    std::size_t start = lex.pos;
    bool digits = false;
    while (lex.pos < lex.text.size() &&
           std::isdigit(static_cast<unsigned char>(lex.text[lex.pos]))) {
      ++lex.pos;
      digits = true;
    }
    if (lex.pos < lex.text.size() && lex.text[lex.pos] == '.') {
      ++lex.pos;
      while (lex.pos < lex.text.size() &&
             std::isdigit(static_cast<unsigned char>(lex.text[lex.pos]))) {
        ++lex.pos;
        digits = true;
      }
    }
    if (!digits) throw ParseError("malformed number", start);
    if (lex.pos < lex.text.size() && (lex.text[lex.pos] == 'e' || lex.text[lex.pos] == 'E')) {
      std::size_t mark = lex.pos;
      ++lex.pos;
      if (lex.pos < lex.text.size() && (lex.text[lex.pos] == '+' || lex.text[lex.pos] == '-'))
        ++lex.pos;
      if (lex.pos < lex.text.size() &&
          std::isdigit(static_cast<unsigned char>(lex.text[lex.pos]))) {
        while (lex.pos < lex.text.size() &&
               std::isdigit(static_cast<unsigned char>(lex.text[lex.pos])))
          ++lex.pos;
      } else {
        lex.pos = mark;  // 'e' was not an exponent
      }
    }
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(lex.text.data() + start, lex.text.data() + lex.pos, v);
    if (ec != std::errc() || ptr != lex.text.data() + lex.pos)
      throw ParseError("malformed number", start);
    return Expr::constant(v);
  }
};

}  // namespace

Expr parse(std::string_view text, const std::vector<std::string>& variables) {
  Parser p{Lexer{text, 0}, variables};
  Expr e = p.parse_expr();
  if (p.lex.peek() != '\0')
    throw ParseError("trailing characters after expression", p.lex.pos);
  return e;
}

// ---------------------------------------------------------------------------
// printer

std::string format_double(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  (void)ec;
  return std::string(buf, ptr);
}

namespace {

// precedence: add/sub 1, mul/div 2, unary 3, pow 4, atom 5
int precedence(const Expr& e) {
  switch (e.kind()) {
    case ExprKind::Add:
    case ExprKind::Sub: return 1;
    case ExprKind::Mul:
    case ExprKind::Div: return 2;
    case ExprKind::Negate: return 3;
    case ExprKind::Pow: return 4;
    case ExprKind::Constant:
      return e.constant_value() < 0.0 ? 3 : 5;
    default: return 5;
  }
}

void print_node(const Expr& e, const std::vector<std::string>& vars, std::string& out,
                bool is_root);

void print_child(const Expr& e, const std::vector<std::string>& vars, std::string& out,
                 int min_prec) {
  if (precedence(e) < min_prec) {
    out += '(';
    print_node(e, vars, out, true);  // parens already supplied
    out += ')';
  } else {
    print_node(e, vars, out, false);
  }
}

void print_node(const Expr& e, const std::vector<std::string>& vars, std::string& out,
                bool is_root) {
  switch (e.kind()) {
    case ExprKind::Constant: {
      double v = e.constant_value();
      if (v < 0.0 && !is_root) {
        out += '(';
        out += format_double(v);
        out += ')';
      } else {
        out += format_double(v);
      }
      break;
    }
    case ExprKind::Variable: {
      int i = e.variable_index();
      if (i >= 0 && static_cast<std::size_t>(i) < vars.size()) out += vars[static_cast<std::size_t>(i)];
      else out += "x" + std::to_string(i);
      break;
    }
    case ExprKind::Negate:
      out += '-';
      print_child(e.child(0), vars, out, 4);
      break;
    case ExprKind::Add:
      print_child(e.child(0), vars, out, 1);
      out += " + ";
      print_child(e.child(1), vars, out, 2);
      break;
    case ExprKind::Sub:
      print_child(e.child(0), vars, out, 1);
      out += " - ";
      print_child(e.child(1), vars, out, 2);
      break;
    case ExprKind::Mul:
      print_child(e.child(0), vars, out, 2);
      out += "*";
      print_child(e.child(1), vars, out, 3);
      break;
    case ExprKind::Div:
      print_child(e.child(0), vars, out, 2);
      out += "/";
      print_child(e.child(1), vars, out, 3);
      break;
    case ExprKind::Pow:
      print_child(e.child(0), vars, out, 5);
      out += "^";
      print_child(e.child(1), vars, out, 3);
      break;
    case ExprKind::Func:
      out += func_name(e.func());
      out += '(';
      print_node(e.child(0), vars, out, true);
      out += ')';
      break;
  }
}

}  // namespace

std::string to_string(const Expr& e, const std::vector<std::string>& variables) {
  std::string out;
  print_node(e, variables, out, true);
  return out;
}

}  // namespace ceqopt
