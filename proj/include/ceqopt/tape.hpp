#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "ceqopt/expr.hpp"

namespace ceqopt {

enum class EvalStatus : std::uint8_t { Ok, DomainError };

/// Flat SSA program compiled from a set of Exprs with common-subexpression
/// elimination. Evaluation is allocation-free given a reusable scratch
/// buffer, which makes it suitable for the inner loops of the solvers.
class CompiledTape {
 public:
  CompiledTape() = default;
  static CompiledTape compile(std::span<const Expr> outputs, int nvars);

  /// input.size() == nvars, out.size() == output_count(). scratch is resized
  /// as needed and may be reused across calls.
  EvalStatus evaluate(std::span<const double> input, std::span<double> out,
                      std::vector<double>& scratch) const;

  int nvars() const { return nvars_; }
  int output_count() const { return static_cast<int>(outputs_.size()); }
  int slot_count() const { return nslots_; }

 private:
  enum class Op : std::uint8_t {
    Const, Var, Neg, Add, Sub, Mul, Div, Pow, Sin, Cos, Tan, Exp, Log, Sqrt
  };
  struct Instr {
    Op op;
    std::int32_t a = -1;
    std::int32_t b = -1;
    double imm = 0.0;
  };
  int nvars_ = 0;
  int nslots_ = 0;
  std::vector<Instr> code_;
  std::vector<std::int32_t> outputs_;
  friend struct TapeCompiler;
};

}  // namespace ceqopt
