#include "kppsym/compiled.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "kppsym/errors.hpp"
#include "kppsym/special_functions.hpp"

namespace kppsym {

CompiledExpression::CompiledExpression(const Expression& e, const std::vector<std::string>& variables) {
  emit(e, variables);
  std::size_t depth = 0;
  for (const auto& ins : program_) {
    switch (ins.op) {
      case Op::Constant:
      case Op::Variable:
        max_stack_ = std::max(max_stack_, ++depth);
        break;
      case Op::Add:
      case Op::Mul:
        depth -= ins.arg - 1;
        break;
      case Op::Pow:
        --depth;
        break;
      default:
        break;
    }
  }
}

void CompiledExpression::emit(const Expression& e, const std::vector<std::string>& variables) {
  switch (e.kind()) {
    case Kind::Number:
      program_.push_back({Op::Constant, e.value().get_d()});
      return;
    case Kind::Symbol:
    case Kind::Jet: {
      auto it = std::find(variables.begin(), variables.end(), e.key());
      if (it != variables.end()) {
        program_.push_back({Op::Variable, 0.0, static_cast<std::size_t>(it - variables.begin())});
      } else if (e.key() == "pi") {
        program_.push_back({Op::Constant, std::numbers::pi});
      } else if (e.key() == "e") {
        program_.push_back({Op::Constant, std::numbers::e});
      } else {
        throw UnboundSymbol(e.key());
      }
      return;
    }
    case Kind::Sum:
    case Kind::Product:
      for (const auto& o : e.operands()) emit(o, variables);
      program_.push_back({e.is(Kind::Sum) ? Op::Add : Op::Mul, 0.0, e.operands().size()});
      return;
    case Kind::Power:
      emit(e.base(), variables);
      emit(e.exponent(), variables);
      program_.push_back({Op::Pow});
      return;
    case Kind::Function: {
      emit(e.argument(), variables);
      Op op = Op::Exp;
      switch (e.function()) {
        case Function::Exp: op = Op::Exp; break;
        case Function::Ln: op = Op::Ln; break;
        case Function::Erf: op = Op::Erf; break;
        case Function::LambertW: op = Op::LambertW; break;
        case Function::Sqrt: op = Op::Sqrt; break;
        case Function::Abs: op = Op::Abs; break;
      }
      program_.push_back({op});
      return;
    }
  }
}

double CompiledExpression::operator()(std::span<const double> values) const {
  std::vector<double> stack;
  stack.reserve(max_stack_);
  for (const auto& ins : program_) {
    switch (ins.op) {
      case Op::Constant:
        stack.push_back(ins.constant);
        break;
      case Op::Variable:
        stack.push_back(values[ins.arg]);
        break;
      case Op::Add: {
        double s = 0.0;
        for (std::size_t i = 0; i < ins.arg; ++i) s += stack[stack.size() - ins.arg + i];
        stack.resize(stack.size() - ins.arg);
        stack.push_back(s);
        break;
      }
      case Op::Mul: {
        double p = 1.0;
        for (std::size_t i = 0; i < ins.arg; ++i) p *= stack[stack.size() - ins.arg + i];
        stack.resize(stack.size() - ins.arg);
        stack.push_back(p);
        break;
      }
      case Op::Pow: {
        double x = stack.back();
        stack.pop_back();
        double b = stack.back();
        if (b == 0.0 && x < 0.0) throw DomainError("division by zero");
        if (b < 0.0 && x != std::floor(x)) throw DomainError("fractional power of a negative number");
        stack.back() = x == -1.0 ? 1.0 / b : (x == 0.5 ? std::sqrt(b) : std::pow(b, x));
        break;
      }
      case Op::Exp:
        stack.back() = std::exp(stack.back());
        break;
      case Op::Ln:
        if (stack.back() <= 0.0) throw DomainError("logarithm of a non-positive number");
        stack.back() = std::log(stack.back());
        break;
      case Op::Erf:
        stack.back() = special::erf(stack.back());
        break;
      case Op::LambertW:
        stack.back() = special::lambert_w(stack.back());
        break;
      case Op::Sqrt:
        if (stack.back() < 0.0) throw DomainError("square root of a negative number");
        stack.back() = std::sqrt(stack.back());
        break;
      case Op::Abs:
        stack.back() = std::abs(stack.back());
        break;
    }
    if (!std::isfinite(stack.back())) throw DomainError("non-finite value during evaluation");
  }
  return stack.back();
}

}  // namespace kppsym
