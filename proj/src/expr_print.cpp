#include <ostream>
#include <string>

#include "kppsym/expr.hpp"

namespace kppsym {

namespace {

std::string rational_text(const Rational& q) {
  if (q.get_den() == 1) return q.get_num().get_str();
  return q.get_num().get_str() + "/" + q.get_den().get_str();
}

bool prints_bare(const Expression& e) {
  return e.is_atom() || e.is(Kind::Function) || (e.is_integer() && e.value() >= 0);
}

bool is_negative_term(const Expression& t) {
  if (t.is_number()) return t.value() < 0;
  return t.is(Kind::Product) && t.operands().front().is_number() && t.operands().front().value() < 0;
}

std::string print(const Expression& e);

std::string print_factor(const Expression& f) {
  if (f.is(Kind::Sum)) return "(" + print(f) + ")";
  return print(f);
}

std::string print_product(const Expression& e) {
  auto ops = e.operands();
  std::string out;
  std::size_t start = 0;
  if (ops.front().is_number()) {
    const Rational& c = ops.front().value();
    if (c == -1) {
      out = "-";
    } else {
      out = rational_text(c) + "*";
    }
    start = 1;
  }
  for (std::size_t i = start; i < ops.size(); ++i) {
    if (i > start) out += "*";
    out += print_factor(ops[i]);
  }
  return out;
}

std::string print_sum(const Expression& e) {
  std::string out;
  bool first = true;
  for (const auto& t : e.operands()) {
    if (first) {
      out = print_factor(t);
      first = false;
    } else if (is_negative_term(t)) {
      out += " - " + print_factor(-t);
    } else {
      out += " + " + print_factor(t);
    }
  }
  return out;
}

std::string print(const Expression& e) {
  switch (e.kind()) {
    case Kind::Number:
      return rational_text(e.value());
    case Kind::Symbol:
    case Kind::Jet:
      return e.key();
    case Kind::Function:
      return std::string(function_name(e.function())) + "(" + print(e.argument()) + ")";
    case Kind::Power: {
      std::string b = prints_bare(e.base()) ? print(e.base()) : "(" + print(e.base()) + ")";
      std::string x = prints_bare(e.exponent()) ? print(e.exponent()) : "(" + print(e.exponent()) + ")";
      return b + "^" + x;
    }
    case Kind::Product:
      return print_product(e);
    case Kind::Sum:
      return print_sum(e);
  }
  return "?";
}

}  // namespace

std::string to_string(const Expression& e) { return print(e); }

std::ostream& operator<<(std::ostream& os, const Expression& e) { return os << print(e); }

}  // namespace kppsym
