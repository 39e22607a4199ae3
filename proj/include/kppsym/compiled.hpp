#pragma once

#include <span>
#include <string>
#include <vector>

#include "kppsym/expr.hpp"

namespace kppsym {

/// An expression flattened into a postfix program over a fixed list of
/// variable keys, for repeated double-precision evaluation.
class CompiledExpression {
 public:
  /// Throws UnboundSymbol if an atom of `e` is neither listed in `variables`
  /// nor one of the constants `pi` and `e`.
  CompiledExpression(const Expression& e, const std::vector<std::string>& variables);

  /// Throws DomainError on a non-finite intermediate or result.
  double operator()(std::span<const double> values) const;

 private:
  enum class Op { Constant, Variable, Add, Mul, Pow, Exp, Ln, Erf, LambertW, Sqrt, Abs };
  struct Instruction {
    Op op;
    double constant = 0.0;
    std::size_t arg = 0;
  };

  void emit(const Expression& e, const std::vector<std::string>& variables);

  std::vector<Instruction> program_;
  std::size_t max_stack_ = 0;
};

}  // namespace kppsym
