#include "ceqopt/tape.hpp"

#include <cmath>
#include <cstring>
#include <map>
#include <tuple>
#include <unordered_map>

namespace ceqopt {

struct TapeCompiler {
  CompiledTape tape;
  std::unordered_map<const Expr::Node*, std::int32_t> by_node;
  // value numbering: (op, a, b, imm bits) -> slot
  std::map<std::tuple<int, std::int32_t, std::int32_t, std::uint64_t>, std::int32_t> by_value;

  std::int32_t emit(CompiledTape::Op op, std::int32_t a, std::int32_t b, double imm) {
    std::uint64_t bits = 0;
    std::memcpy(&bits, &imm, sizeof(bits));
    auto key = std::make_tuple(static_cast<int>(op), a, b, bits);
    auto it = by_value.find(key);
    if (it != by_value.end()) return it->second;
    auto slot = static_cast<std::int32_t>(tape.code_.size());
    tape.code_.push_back({op, a, b, imm});
    by_value.emplace(key, slot);
    return slot;
  }

  std::int32_t visit(const Expr& e) {
    auto it = by_node.find(e.raw());
    if (it != by_node.end()) return it->second;
    std::int32_t slot = -1;
    using Op = CompiledTape::Op;
    switch (e.kind()) {
      case ExprKind::Constant:
        slot = emit(Op::Const, -1, -1, e.constant_value());
        break;
      case ExprKind::Variable:
        slot = emit(Op::Var, e.variable_index(), -1, 0.0);
        break;
      case ExprKind::Negate:
        slot = emit(Op::Neg, visit(e.child(0)), -1, 0.0);
        break;
      case ExprKind::Add:
        slot = emit(Op::Add, visit(e.child(0)), visit(e.child(1)), 0.0);
        break;
      case ExprKind::Sub:
        slot = emit(Op::Sub, visit(e.child(0)), visit(e.child(1)), 0.0);
        break;
      case ExprKind::Mul:
        slot = emit(Op::Mul, visit(e.child(0)), visit(e.child(1)), 0.0);
        break;
      case ExprKind::Div:
        slot = emit(Op::Div, visit(e.child(0)), visit(e.child(1)), 0.0);
        break;
      case ExprKind::Pow:
        slot = emit(Op::Pow, visit(e.child(0)), visit(e.child(1)), 0.0);
        break;
      case ExprKind::Func: {
        Op op = Op::Sin;
        switch (e.func()) {
          case FuncId::Sin: op = Op::Sin; break;
          case FuncId::Cos: op = Op::Cos; break;
          case FuncId::Tan: op = Op::Tan; break;
          case FuncId::Exp: op = Op::Exp; break;
          case FuncId::Log: op = Op::Log; break;
          case FuncId::Sqrt: op = Op::Sqrt; break;
        }
        slot = emit(op, visit(e.child(0)), -1, 0.0);
        break;
      }
    }
    by_node.emplace(e.raw(), slot);
    return slot;
  }
};

CompiledTape CompiledTape::compile(std::span<const Expr> outputs, int nvars) {
  TapeCompiler c;
  c.tape.nvars_ = nvars;
  for (const Expr& e : outputs) c.tape.outputs_.push_back(c.visit(e));
  c.tape.nslots_ = static_cast<int>(c.tape.code_.size());
  return std::move(c.tape);
}

EvalStatus CompiledTape::evaluate(std::span<const double> input, std::span<double> out,
                                  std::vector<double>& scratch) const {
  scratch.resize(static_cast<std::size_t>(nslots_));
  double* s = scratch.data();
  for (std::size_t i = 0; i < code_.size(); ++i) {
    const Instr& in = code_[i];
    double r;
    switch (in.op) {
      case Op::Const: r = in.imm; break;
      case Op::Var: r = input[static_cast<std::size_t>(in.a)]; break;
      case Op::Neg: r = -s[in.a]; break;
      case Op::Add: r = s[in.a] + s[in.b]; break;
      case Op::Sub: r = s[in.a] - s[in.b]; break;
      case Op::Mul: r = s[in.a] * s[in.b]; break;
      case Op::Div:
        if (s[in.b] == 0.0) return EvalStatus::DomainError;
        r = s[in.a] / s[in.b];
        break;
      case Op::Pow: {
        const char* err = nullptr;
        r = detail::eval_pow(s[in.a], s[in.b], &err);
        if (err) return EvalStatus::DomainError;
        break;
      }
      case Op::Sin: r = std::sin(s[in.a]); break;
      case Op::Cos: r = std::cos(s[in.a]); break;
      case Op::Tan: r = std::tan(s[in.a]); break;
      case Op::Exp: r = std::exp(s[in.a]); break;
      case Op::Log:
        if (s[in.a] <= 0.0) return EvalStatus::DomainError;
        r = std::log(s[in.a]);
        break;
      case Op::Sqrt:
        if (s[in.a] < 0.0) return EvalStatus::DomainError;
        r = std::sqrt(s[in.a]);
        break;
      default: r = 0.0; break;
    }
    s[i] = r;
  }
  for (std::size_t i = 0; i < outputs_.size(); ++i)
    out[i] = s[outputs_[static_cast<std::size_t>(i)]];
  return EvalStatus::Ok;
}

}  // namespace ceqopt
