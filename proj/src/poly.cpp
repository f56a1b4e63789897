#include "ceqopt/poly.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>

namespace ceqopt {

namespace {
constexpr double kPruneRel = 1e-12;
}

MultiPoly MultiPoly::constant(int nvars, double c) {
  MultiPoly p(nvars);
  if (c != 0.0) p.terms_.emplace(Monomial(static_cast<std::size_t>(nvars), 0), c);
  return p;
}

MultiPoly MultiPoly::variable(int nvars, int index) {
  MultiPoly p(nvars);
  Monomial m(static_cast<std::size_t>(nvars), 0);
  m[static_cast<std::size_t>(index)] = 1;
  p.terms_.emplace(std::move(m), 1.0);
  return p;
}

bool MultiPoly::is_constant() const {
  if (terms_.empty()) return true;
  if (terms_.size() != 1) return false;
  const Monomial& m = terms_.begin()->first;
  return std::all_of(m.begin(), m.end(), [](int e) { return e == 0; });
}

double MultiPoly::constant_value() const {
  return terms_.empty() ? 0.0 : terms_.begin()->second;
}

void MultiPoly::add_term(Monomial m, double coeff) {
  auto [it, inserted] = terms_.emplace(std::move(m), coeff);
  if (!inserted) {
    it->second += coeff;
    if (it->second == 0.0) terms_.erase(it);
  }
}

double MultiPoly::max_abs_coeff() const {
  double m = 0.0;
  for (const auto& [mono, c] : terms_) m = std::max(m, std::abs(c));
  return m;
}

void MultiPoly::prune() {
  double scale = max_abs_coeff();
  if (scale == 0.0) return;
  for (auto it = terms_.begin(); it != terms_.end();) {
    if (std::abs(it->second) <= kPruneRel * scale) it = terms_.erase(it);
    else ++it;
  }
}

MultiPoly& MultiPoly::operator+=(const MultiPoly& o) {
  for (const auto& [m, c] : o.terms_) add_term(m, c);
  prune();
  return *this;
}

MultiPoly& MultiPoly::operator-=(const MultiPoly& o) {
  for (const auto& [m, c] : o.terms_) add_term(m, -c);
  prune();
  return *this;
}

MultiPoly operator*(const MultiPoly& a, const MultiPoly& b) {
  MultiPoly r(a.nvars_);
  for (const auto& [ma, ca] : a.terms_) {
    for (const auto& [mb, cb] : b.terms_) {
      MultiPoly::Monomial m(ma.size());
      for (std::size_t i = 0; i < m.size(); ++i) m[i] = ma[i] + mb[i];
      r.add_term(std::move(m), ca * cb);
    }
  }
  r.prune();
  return r;
}

MultiPoly MultiPoly::operator-() const {
  MultiPoly r(nvars_);
  for (const auto& [m, c] : terms_) r.terms_.emplace(m, -c);
  return r;
}

MultiPoly MultiPoly::scaled(double s) const {
  MultiPoly r(nvars_);
  if (s == 0.0) return r;
  for (const auto& [m, c] : terms_) r.terms_.emplace(m, c * s);
  return r;
}

MultiPoly MultiPoly::pow(int exponent) const {
  MultiPoly r = constant(nvars_, 1.0);
  for (int i = 0; i < exponent; ++i) r = r * *this;
  return r;
}

MultiPoly MultiPoly::derivative(int var) const {
  MultiPoly r(nvars_);
  auto v = static_cast<std::size_t>(var);
  for (const auto& [m, c] : terms_) {
    if (m[v] == 0) continue;
    Monomial d = m;
    d[v] -= 1;
    r.add_term(std::move(d), c * m[v]);
  }
  return r;
}

double MultiPoly::evaluate(const Point& p) const {
  double sum = 0.0;
  for (const auto& [m, c] : terms_) {
    double t = c;
    for (std::size_t i = 0; i < m.size(); ++i) {
      for (int e = 0; e < m[i]; ++e) t *= p[i];
    }
    sum += t;
  }
  return sum;
}

Expr MultiPoly::to_expr() const {
  if (terms_.empty()) return Expr::constant(0.0);
  std::vector<Expr> parts;
  parts.reserve(terms_.size());
  for (const auto& [m, c] : terms_) {
    Expr term;
    bool have_factor = false;
    for (std::size_t i = 0; i < m.size(); ++i) {
      if (m[i] == 0) continue;
      Expr f = Expr::variable(static_cast<int>(i));
      if (m[i] > 1) f = Expr::pow(f, Expr::constant(m[i]));
      term = have_factor ? term * f : f;
      have_factor = true;
    }
    if (!have_factor) term = Expr::constant(c);
    else if (c == -1.0) term = -term;
    else if (c != 1.0) term = Expr::constant(c) * term;
    parts.push_back(std::move(term));
  }
  // balanced sum keeps recursion depth logarithmic for large polynomials
  while (parts.size() > 1) {
    std::vector<Expr> next;
    next.reserve(parts.size() / 2 + 1);
    for (std::size_t i = 0; i + 1 < parts.size(); i += 2) next.push_back(parts[i] + parts[i + 1]);
    if (parts.size() % 2 == 1) next.push_back(parts.back());
    parts = std::move(next);
  }
  return parts[0];
}

std::optional<MultiPoly> MultiPoly::from_expr(const Expr& e, int nvars) {
  switch (e.kind()) {
    case ExprKind::Constant:
      return constant(nvars, e.constant_value());
    case ExprKind::Variable:
      if (e.variable_index() >= nvars) return std::nullopt;
      return variable(nvars, e.variable_index());
    case ExprKind::Negate: {
      auto a = from_expr(e.child(0), nvars);
      if (!a) return std::nullopt;
      return -*a;
    }
    case ExprKind::Add:
    case ExprKind::Sub:
    case ExprKind::Mul: {
      auto a = from_expr(e.child(0), nvars);
      auto b = from_expr(e.child(1), nvars);
      if (!a || !b) return std::nullopt;
      if (e.kind() == ExprKind::Add) return *a + *b;
      if (e.kind() == ExprKind::Sub) return *a - *b;
      return *a * *b;
    }
    case ExprKind::Div: {
      auto a = from_expr(e.child(0), nvars);
      auto b = from_expr(e.child(1), nvars);
      if (!a || !b || !b->is_constant() || b->constant_value() == 0.0) return std::nullopt;
      return a->scaled(1.0 / b->constant_value());
    }
    case ExprKind::Pow: {
      const Expr& expo = e.child(1);
      if (!expo.is_constant()) return std::nullopt;
      double ev = expo.constant_value();
      if (!detail::is_integer_valued(ev) || ev < 0.0 || ev > 64.0) return std::nullopt;
      auto a = from_expr(e.child(0), nvars);
      if (!a) return std::nullopt;
      return a->pow(static_cast<int>(ev));
    }
    case ExprKind::Func:
      return std::nullopt;
  }
  return std::nullopt;
}

std::optional<MultiPoly> MultiPoly::divide_exact(const MultiPoly& num, const MultiPoly& den) {
  if (den.is_zero()) return std::nullopt;
  if (den.is_constant()) return num.scaled(1.0 / den.constant_value());
  MultiPoly q(num.nvars_);
  MultiPoly r = num;
  // leading term under the map's (lexicographic) order
  auto lead = [](const MultiPoly& p) { return std::prev(p.terms_.end()); };
  const auto dl = lead(den);
  double rscale = std::max(num.max_abs_coeff(), den.max_abs_coeff());
  int guard = num.term_count() * (den.term_count() + 2) + 64;
  while (!r.is_zero()) {
    if (--guard < 0) return std::nullopt;
    auto rl = lead(r);
    Monomial qm(rl->first.size());
    for (std::size_t i = 0; i < qm.size(); ++i) {
      qm[i] = rl->first[i] - dl->first[i];
      if (qm[i] < 0) return std::nullopt;
    }
    double qc = rl->second / dl->second;
    q.add_term(qm, qc);
    MultiPoly t(num.nvars_);
    t.terms_.emplace(std::move(qm), qc);
    r -= t * den;
    // clean residue left by float cancellation
    for (auto it = r.terms_.begin(); it != r.terms_.end();) {
      if (std::abs(it->second) <= 1e-10 * rscale) it = r.terms_.erase(it);
      else ++it;
    }
  }
  return q;
}

// ---------------------------------------------------------------------------

std::optional<RationalPoly> rational_from_expr(const Expr& e, int nvars) {
  switch (e.kind()) {
    case ExprKind::Constant:
    case ExprKind::Variable: {
      auto p = MultiPoly::from_expr(e, nvars);
      if (!p) return std::nullopt;
      return RationalPoly{*p, MultiPoly::constant(nvars, 1.0)};
    }
    case ExprKind::Negate: {
      auto a = rational_from_expr(e.child(0), nvars);
      if (!a) return std::nullopt;
      return RationalPoly{-a->num, a->den};
    }
    case ExprKind::Add:
    case ExprKind::Sub: {
      auto a = rational_from_expr(e.child(0), nvars);
      auto b = rational_from_expr(e.child(1), nvars);
      if (!a || !b) return std::nullopt;
      MultiPoly n = a->num * b->den;
      MultiPoly m = b->num * a->den;
      return RationalPoly{e.kind() == ExprKind::Add ? n + m : n - m, a->den * b->den};
    }
    case ExprKind::Mul: {
      auto a = rational_from_expr(e.child(0), nvars);
      auto b = rational_from_expr(e.child(1), nvars);
      if (!a || !b) return std::nullopt;
      return RationalPoly{a->num * b->num, a->den * b->den};
    }
    case ExprKind::Div: {
      auto a = rational_from_expr(e.child(0), nvars);
      auto b = rational_from_expr(e.child(1), nvars);
      if (!a || !b || b->num.is_zero()) return std::nullopt;
      return RationalPoly{a->num * b->den, a->den * b->num};
    }
    case ExprKind::Pow: {
      const Expr& expo = e.child(1);
      if (!expo.is_constant()) return std::nullopt;
      double ev = expo.constant_value();
      if (!detail::is_integer_valued(ev) || std::abs(ev) > 64.0) return std::nullopt;
      auto a = rational_from_expr(e.child(0), nvars);
      if (!a) return std::nullopt;
      int m = static_cast<int>(std::abs(ev));
      if (ev >= 0.0) return RationalPoly{a->num.pow(m), a->den.pow(m)};
      if (a->num.is_zero()) return std::nullopt;
      return RationalPoly{a->den.pow(m), a->num.pow(m)};
    }
    case ExprKind::Func:
      return std::nullopt;
  }
  return std::nullopt;
}

namespace {

// gcd of |coefficients| rounded to integers; 1 when any coefficient is not
// close to an integer
std::uint64_t integer_content(const MultiPoly& p) {
  std::uint64_t g = 0;
  for (const auto& [m, c] : p.terms()) {
    double a = std::abs(c);
    if (a >= 9.0e15 || std::abs(a - std::nearbyint(a)) > 1e-9 * std::max(1.0, a)) return 1;
    auto v = static_cast<std::uint64_t>(std::llround(a));
    if (v == 0) return 1;
    g = std::gcd(g, v);
    if (g == 1) return 1;
  }
  return g == 0 ? 1 : g;
}

MultiPoly::Monomial monomial_content(const MultiPoly& p) {
  MultiPoly::Monomial min_exp;
  bool first = true;
  for (const auto& [m, c] : p.terms()) {
    if (first) {
      min_exp = m;
      first = false;
    } else {
      for (std::size_t i = 0; i < m.size(); ++i) min_exp[i] = std::min(min_exp[i], m[i]);
    }
  }
  if (first) min_exp.assign(static_cast<std::size_t>(p.nvars()), 0);
  return min_exp;
}

MultiPoly strip_content(const MultiPoly& p, const MultiPoly::Monomial& mono, double scale) {
  MultiPoly r(p.nvars());
  for (const auto& [m, c] : p.terms()) {
    MultiPoly::Monomial d(m.size());
    for (std::size_t i = 0; i < m.size(); ++i) d[i] = m[i] - mono[i];
    r.add_term(std::move(d), c / scale);
  }
  return r;
}

}  // namespace

RationalPoly cancel_rational(RationalPoly r) {
  const int nv = r.num.nvars();
  if (r.num.is_zero()) return {MultiPoly(nv), MultiPoly::constant(nv, 1.0)};
  if (r.den.is_constant())
    return {r.num.scaled(1.0 / r.den.constant_value()), MultiPoly::constant(nv, 1.0)};

  if (auto q = MultiPoly::divide_exact(r.num, r.den))
    return {*q, MultiPoly::constant(nv, 1.0)};

  // common monomial * integer content
  auto mn = monomial_content(r.num);
  auto md = monomial_content(r.den);
  MultiPoly::Monomial common(mn.size());
  bool have_mono = false;
  for (std::size_t i = 0; i < mn.size(); ++i) {
    common[i] = std::min(mn[i], md[i]);
    if (common[i] > 0) have_mono = true;
  }
  std::uint64_t g = std::gcd(integer_content(r.num), integer_content(r.den));
  if (have_mono || g > 1) {
    double s = static_cast<double>(g);
    r.num = strip_content(r.num, common, s);
    r.den = strip_content(r.den, common, s);
    if (r.den.is_constant())
      return {r.num.scaled(1.0 / r.den.constant_value()), MultiPoly::constant(nv, 1.0)};
    if (auto q = MultiPoly::divide_exact(r.num, r.den))
      return {*q, MultiPoly::constant(nv, 1.0)};
  }

  // normalize so the denominator's leading coefficient is positive
  if (!r.den.terms().empty() && std::prev(r.den.terms().end())->second < 0.0) {
    r.num = -r.num;
    r.den = -r.den;
  }
  return r;
}

Expr rational_to_expr(const RationalPoly& r) {
  if (r.den.is_constant() && r.den.constant_value() == 1.0) return r.num.to_expr();
  return r.num.to_expr() / r.den.to_expr();
}

}  // namespace ceqopt
