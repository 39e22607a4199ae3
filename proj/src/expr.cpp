#include "kppsym/expr.hpp"

#include <algorithm>
#include <cassert>
#include <random>
#include <utility>

#include "kppsym/compiled.hpp"
#include "kppsym/errors.hpp"

namespace kppsym {

namespace detail {

struct Node {
  Kind kind = Kind::Number;
  Rational value;
  std::string name;
  std::vector<std::string> index;
  Function fn = Function::Exp;
  std::vector<Expression> operands;
  std::string key;
  std::size_t hash = 0;
};

}  // namespace detail

namespace {

constexpr long kMaxFoldedExponent = 4096;

std::size_t hash_combine(std::size_t seed, std::size_t v) {
  return seed ^ (v + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2));
}

std::size_t hash_rational(const Rational& q) {
  std::size_t h = std::hash<long>{}(static_cast<long>(mpz_fdiv_ui(q.get_num_mpz_t(), 1000000007UL)));
  h = hash_combine(h, static_cast<std::size_t>(mpz_sgn(q.get_num_mpz_t()) + 1));
  return hash_combine(h, static_cast<std::size_t>(mpz_fdiv_ui(q.get_den_mpz_t(), 998244353UL)));
}

std::string jet_key(const std::string& dependent, const std::vector<std::string>& index) {
  bool shorthand = std::all_of(index.begin(), index.end(), [](const std::string& v) { return v == "x" || v == "t"; });
  if (shorthand) {
    std::string out = dependent + "_";
    for (const auto& v : index) out += v;
    return out;
  }
  std::string out = "Diff(" + dependent;
  for (std::size_t i = 0; i < index.size();) {
    std::size_t j = i;
    while (j < index.size() && index[j] == index[i]) ++j;
    out += ", " + index[i] + ", " + std::to_string(j - i);
    i = j;
  }
  return out + ")";
}

int kind_rank(Kind k) { return static_cast<int>(k); }

}  // namespace

struct ExpressionFactory {
  static Expression make(detail::Node n) {
    std::size_t h = std::hash<int>{}(static_cast<int>(n.kind));
    switch (n.kind) {
      case Kind::Number:
        h = hash_combine(h, hash_rational(n.value));
        break;
      case Kind::Symbol:
        h = hash_combine(h, std::hash<std::string>{}(n.name));
        n.key = n.name;
        break;
      case Kind::Jet:
        n.key = jet_key(n.name, n.index);
        h = hash_combine(h, std::hash<std::string>{}(n.key));
        break;
      case Kind::Function:
        h = hash_combine(h, static_cast<std::size_t>(n.fn));
        [[fallthrough]];
      default:
        for (const auto& op : n.operands) h = hash_combine(h, op.hash());
        break;
    }
    n.hash = h;
    return Expression(std::make_shared<const detail::Node>(std::move(n)));
  }

  static Expression number(const Rational& q) {
    detail::Node n;
    n.kind = Kind::Number;
    n.value = q;
    n.value.canonicalize();
    return make(std::move(n));
  }

  static Expression compound(Kind kind, std::vector<Expression> operands, Function fn = Function::Exp) {
    detail::Node n;
    n.kind = kind;
    n.fn = fn;
    n.operands = std::move(operands);
    return make(std::move(n));
  }
};

namespace {

const Expression& zero_expr() {
  static const Expression z = ExpressionFactory::number(Rational(0));
  return z;
}

const Expression& one_expr() {
  static const Expression o = ExpressionFactory::number(Rational(1));
  return o;
}

}  // namespace

std::string_view function_name(Function f) {
  switch (f) {
    case Function::Exp: return "exp";
    case Function::Ln: return "ln";
    case Function::Erf: return "erf";
    case Function::LambertW: return "lambertW";
    case Function::Sqrt: return "sqrt";
    case Function::Abs: return "abs";
  }
  return "?";
}

std::optional<Function> function_from_name(std::string_view name) {
  for (Function f : {Function::Exp, Function::Ln, Function::Erf, Function::LambertW, Function::Sqrt, Function::Abs}) {
    if (function_name(f) == name) return f;
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Accessors

Expression::Expression() : node_(zero_expr().node_) {}
Expression::Expression(int value) : Expression(num(Rational(value))) {}
Expression::Expression(const Rational& value) : Expression(num(value)) {}

Kind Expression::kind() const { return node_->kind; }
bool Expression::is_zero() const { return is_number() && node_->value == 0; }
bool Expression::is_one() const { return is_number() && node_->value == 1; }
bool Expression::is_integer() const { return is_number() && node_->value.get_den() == 1; }
const Rational& Expression::value() const {
  assert(is_number());
  return node_->value;
}
const std::string& Expression::name() const { return node_->name; }
const std::vector<std::string>& Expression::index() const { return node_->index; }
Function Expression::function() const { return node_->fn; }
std::span<const Expression> Expression::operands() const { return node_->operands; }
const Expression& Expression::base() const { return node_->operands.at(0); }
const Expression& Expression::exponent() const { return node_->operands.at(1); }
const Expression& Expression::argument() const { return node_->operands.at(0); }
const std::string& Expression::key() const { return node_->key; }
std::size_t Expression::hash() const { return node_->hash; }

bool operator==(const Expression& a, const Expression& b) {
  if (a.node_ == b.node_) return true;
  if (a.hash() != b.hash()) return false;
  return compare(a, b) == 0;
}

int compare(const Expression& a, const Expression& b) {
  if (a.node_ == b.node_) return 0;
  if (a.kind() != b.kind()) return kind_rank(a.kind()) < kind_rank(b.kind()) ? -1 : 1;
  switch (a.kind()) {
    case Kind::Number:
      return cmp(a.value(), b.value()) < 0 ? -1 : (cmp(a.value(), b.value()) > 0 ? 1 : 0);
    case Kind::Symbol:
      return a.name().compare(b.name()) < 0 ? -1 : (a.name() == b.name() ? 0 : 1);
    case Kind::Jet: {
      if (int c = a.name().compare(b.name()); c != 0) return c < 0 ? -1 : 1;
      if (a.index().size() != b.index().size()) return a.index().size() < b.index().size() ? -1 : 1;
      if (a.index() == b.index()) return 0;
      return a.index() < b.index() ? -1 : 1;
    }
    case Kind::Function:
      if (a.function() != b.function()) return a.function() < b.function() ? -1 : 1;
      return compare(a.argument(), b.argument());
    default: {
      auto ao = a.operands();
      auto bo = b.operands();
      std::size_t n = std::min(ao.size(), bo.size());
      for (std::size_t i = 0; i < n; ++i) {
        if (int c = compare(ao[i], bo[i]); c != 0) return c;
      }
      if (ao.size() == bo.size()) return 0;
      return ao.size() < bo.size() ? -1 : 1;
    }
  }
}

// ---------------------------------------------------------------------------
// Canonical constructors

Expression num(const Rational& value) {
  if (value == 0) return zero_expr();
  if (value == 1) return one_expr();
  return ExpressionFactory::number(value);
}

Expression num(long numerator, long denominator) {
  if (denominator == 0) throw DomainError("zero denominator");
  Rational q{Integer(numerator), Integer(denominator)};
  q.canonicalize();
  return num(q);
}

Expression sym(std::string name) {
  detail::Node n;
  n.kind = Kind::Symbol;
  n.name = std::move(name);
  return ExpressionFactory::make(std::move(n));
}

Expression jet(std::string dependent, std::vector<std::string> index) {
  if (index.empty()) return sym(std::move(dependent));
  std::sort(index.begin(), index.end());
  detail::Node n;
  n.kind = Kind::Jet;
  n.name = std::move(dependent);
  n.index = std::move(index);
  return ExpressionFactory::make(std::move(n));
}

std::pair<Rational, Expression> split_coefficient(const Expression& term) {
  if (term.is_number()) return {term.value(), one_expr()};
  if (term.is(Kind::Product) && term.operands().front().is_number()) {
    auto ops = term.operands();
    if (ops.size() == 2) return {ops[0].value(), ops[1]};
    return {ops[0].value(), ExpressionFactory::compound(Kind::Product, std::vector<Expression>(ops.begin() + 1, ops.end()))};
  }
  return {Rational(1), term};
}

namespace {

// Attaches a rational coefficient to a canonical coefficient-free term.
Expression scale_term(const Rational& c, const Expression& rest) {
  if (c == 1) return rest;
  if (rest.is_one()) return num(c);
  std::vector<Expression> ops{num(c)};
  if (rest.is(Kind::Product)) {
    ops.insert(ops.end(), rest.operands().begin(), rest.operands().end());
  } else {
    ops.push_back(rest);
  }
  return ExpressionFactory::compound(Kind::Product, std::move(ops));
}

std::pair<Expression, Expression> split_power(const Expression& f) {
  if (f.is(Kind::Power)) return {f.base(), f.exponent()};
  return {f, one_expr()};
}

bool factor_less(const Expression& a, const Expression& b) {
  auto [ab, ae] = split_power(a);
  auto [bb, be] = split_power(b);
  if (int c = compare(ab, bb); c != 0) return c < 0;
  return compare(ae, be) < 0;
}

bool is_even_integer(const Rational& q) { return q.get_den() == 1 && mpz_even_p(q.get_num_mpz_t()); }

// Exact rational root, if one exists.
std::optional<Integer> exact_root(const Integer& v, unsigned long n) {
  if (v < 0) return std::nullopt;
  Integer r;
  if (mpz_root(r.get_mpz_t(), v.get_mpz_t(), n) != 0) return r;
  return std::nullopt;
}

Rational rational_pow(const Rational& base, long e) {
  Integer n, d;
  unsigned long ue = static_cast<unsigned long>(e < 0 ? -e : e);
  mpz_pow_ui(n.get_mpz_t(), base.get_num_mpz_t(), ue);
  mpz_pow_ui(d.get_mpz_t(), base.get_den_mpz_t(), ue);
  Rational r = e < 0 ? Rational(d, n) : Rational(n, d);
  r.canonicalize();
  return r;
}

Expression number_power(const Expression& base, const Rational& r) {
  const Rational& b = base.value();
  if (b == 0) {
    if (r < 0) throw DomainError("division by zero");
    return zero_expr();
  }
  if (b == 1) return one_expr();
  if (r.get_den() == 1) {
    if (!r.get_num().fits_slong_p() || abs(r.get_num()) > kMaxFoldedExponent) {
      return ExpressionFactory::compound(Kind::Power, {base, num(r)});
    }
    return num(rational_pow(b, r.get_num().get_si()));
  }
  if (b > 0 && r.get_den().fits_ulong_p()) {
    unsigned long q = r.get_den().get_ui();
    auto rn = exact_root(b.get_num(), q);
    auto rd = exact_root(b.get_den(), q);
    if (rn && rd) return pow(num(Rational(*rn, *rd)), num(Rational(r.get_num())));
  }
  return ExpressionFactory::compound(Kind::Power, {base, num(r)});
}

}  // namespace

Expression pow(const Expression& base, const Expression& exponent) {
  if (exponent.is_number()) {
    const Rational& r = exponent.value();
    if (r == 0) return one_expr();
    if (r == 1) return base;
    if (base.is_number()) return number_power(base, r);
    if (r.get_den() == 1) {
      if (base.is(Kind::Power)) return pow(base.base(), mul({base.exponent(), exponent}));
      if (base.is(Kind::Product)) {
        std::vector<Expression> fs;
        for (const auto& f : base.operands()) fs.push_back(pow(f, exponent));
        return mul(std::move(fs));
      }
      if (base.is(Kind::Function) && base.function() == Function::Abs && is_even_integer(r)) {
        return pow(base.argument(), exponent);
      }
    }
  } else if (base.is_number() && (base.value() == 1)) {
    return one_expr();
  }
  if (base.is(Kind::Function) && base.function() == Function::Exp) return exp(mul({base.argument(), exponent}));
  return ExpressionFactory::compound(Kind::Power, {base, exponent});
}

Expression add(std::vector<Expression> terms) {
  Rational constant(0);
  std::vector<std::pair<Expression, Rational>> parts;
  std::vector<Expression> stack = std::move(terms);
  while (!stack.empty()) {
    Expression t = std::move(stack.back());
    stack.pop_back();
    if (t.is(Kind::Sum)) {
      stack.insert(stack.end(), t.operands().begin(), t.operands().end());
    } else if (t.is_number()) {
      constant += t.value();
    } else {
      auto [c, rest] = split_coefficient(t);
      parts.emplace_back(std::move(rest), std::move(c));
    }
  }
  std::sort(parts.begin(), parts.end(), [](const auto& a, const auto& b) { return compare(a.first, b.first) < 0; });
  std::vector<Expression> out;
  if (constant != 0) out.push_back(num(constant));
  for (std::size_t i = 0; i < parts.size();) {
    Rational c = parts[i].second;
    std::size_t j = i + 1;
    while (j < parts.size() && parts[j].first == parts[i].first) c += parts[j++].second;
    if (c != 0) out.push_back(scale_term(c, parts[i].first));
    i = j;
  }
  if (out.empty()) return zero_expr();
  if (out.size() == 1) return out.front();
  return ExpressionFactory::compound(Kind::Sum, std::move(out));
}

Expression mul(std::vector<Expression> factors) {
  Rational coeff(1);
  std::vector<std::pair<Expression, Expression>> powers;
  std::vector<Expression> exp_args;
  std::optional<Expression> exp_factor;
  std::vector<Expression> work = std::move(factors);

  for (;;) {
    while (!work.empty()) {
      Expression f = std::move(work.back());
      work.pop_back();
      switch (f.kind()) {
        case Kind::Product:
          work.insert(work.end(), f.operands().begin(), f.operands().end());
          break;
        case Kind::Number:
          coeff *= f.value();
          break;
        case Kind::Function:
          if (f.function() == Function::Exp) {
            exp_args.push_back(f.argument());
            break;
          }
          powers.emplace_back(f, one_expr());
          break;
        case Kind::Power:
          powers.emplace_back(f.base(), f.exponent());
          break;
        default:
          powers.emplace_back(f, one_expr());
          break;
      }
    }
    if (coeff == 0) return zero_expr();

    std::sort(powers.begin(), powers.end(), [](const auto& a, const auto& b) { return compare(a.first, b.first) < 0; });
    std::vector<std::pair<Expression, Expression>> merged;
    for (std::size_t i = 0; i < powers.size();) {
      std::size_t j = i + 1;
      while (j < powers.size() && powers[j].first == powers[i].first) ++j;
      if (j == i + 1) {
        merged.push_back(powers[i]);
      } else {
        std::vector<Expression> exps;
        for (std::size_t k = i; k < j; ++k) exps.push_back(powers[k].second);
        Expression p = pow(powers[i].first, add(std::move(exps)));
        if (p.is(Kind::Power) && p.base() == powers[i].first) {
          merged.emplace_back(p.base(), p.exponent());
        } else if (p == powers[i].first) {
          merged.emplace_back(p, one_expr());
        } else {
          work.push_back(p);
        }
      }
      i = j;
    }
    powers = std::move(merged);
    if (!work.empty()) continue;

    if (!exp_args.empty()) {
      if (exp_factor) exp_args.push_back(exp_factor->argument());
      exp_factor.reset();
      Expression e = exp(add(std::move(exp_args)));
      exp_args.clear();
      if (e.is(Kind::Function) && e.function() == Function::Exp) {
        exp_factor = e;
      } else {
        work.push_back(e);
        continue;
      }
    }

    // W(z) * exp(W(z)) -> z
    if (exp_factor && exp_factor->argument().is(Kind::Function) &&
        exp_factor->argument().function() == Function::LambertW) {
      const Expression w = exp_factor->argument();
      auto it = std::find_if(powers.begin(), powers.end(),
                             [&](const auto& p) { return p.first == w && p.second.is_number(); });
      if (it != powers.end()) {
        Expression remaining = pow(w, add({it->second, num(-1)}));
        powers.erase(it);
        exp_factor.reset();
        work.push_back(w.argument());
        work.push_back(remaining);
        continue;
      }
    }
    break;
  }

  std::vector<Expression> out;
  out.reserve(powers.size() + 2);
  for (auto& [b, e] : powers) {
    out.push_back(e.is_one() ? b : ExpressionFactory::compound(Kind::Power, {b, e}));
  }
  if (exp_factor) out.push_back(*exp_factor);
  std::sort(out.begin(), out.end(), factor_less);
  if (out.empty()) return num(coeff);
  if (coeff == 1 && out.size() == 1) return out.front();
  if (coeff != 1) out.insert(out.begin(), num(coeff));
  return ExpressionFactory::compound(Kind::Product, std::move(out));
}

Expression call(Function f, const Expression& arg) {
  auto is_fn = [&](Function g) { return arg.is(Kind::Function) && arg.function() == g; };
  switch (f) {
    case Function::Sqrt:
      return pow(arg, num(1, 2));
    case Function::Exp:
      if (arg.is_zero()) return one_expr();
      if (is_fn(Function::Ln)) return arg.argument();
      break;
    case Function::Ln:
      if (arg.is_one()) return zero_expr();
      if (is_fn(Function::Exp)) return arg.argument();
      break;
    case Function::Erf:
    case Function::LambertW:
      if (arg.is_zero()) return zero_expr();
      break;
    case Function::Abs:
      if (arg.is_number()) return num(abs(arg.value()));
      if (is_fn(Function::Abs) || is_fn(Function::Exp)) return arg;
      if (arg.is(Kind::Power) && arg.exponent().is_number() && is_even_integer(arg.exponent().value())) return arg;
      break;
  }
  return ExpressionFactory::compound(Kind::Function, {arg}, f);
}

Expression exp(const Expression& e) { return call(Function::Exp, e); }
Expression ln(const Expression& e) { return call(Function::Ln, e); }
Expression erf(const Expression& e) { return call(Function::Erf, e); }
Expression lambert_w(const Expression& e) { return call(Function::LambertW, e); }
Expression sqrt(const Expression& e) { return call(Function::Sqrt, e); }
Expression abs(const Expression& e) { return call(Function::Abs, e); }

Expression operator+(const Expression& a, const Expression& b) { return add({a, b}); }
Expression operator-(const Expression& a, const Expression& b) { return add({a, mul({num(-1), b})}); }
Expression operator*(const Expression& a, const Expression& b) { return mul({a, b}); }
Expression operator/(const Expression& a, const Expression& b) { return mul({a, pow(b, num(-1))}); }
Expression operator-(const Expression& a) { return mul({num(-1), a}); }

namespace unsimplified {
Expression sum(std::vector<Expression> terms) { return ExpressionFactory::compound(Kind::Sum, std::move(terms)); }
Expression product(std::vector<Expression> factors) {
  return ExpressionFactory::compound(Kind::Product, std::move(factors));
}
Expression power(const Expression& base, const Expression& exponent) {
  return ExpressionFactory::compound(Kind::Power, {base, exponent});
}
Expression call(Function f, const Expression& argument) {
  return ExpressionFactory::compound(Kind::Function, {argument}, f);
}
}  // namespace unsimplified

namespace {

template <class F>
Expression rebuild(const Expression& e, F&& child) {
  switch (e.kind()) {
    case Kind::Number:
    case Kind::Symbol:
    case Kind::Jet:
      return e;
    case Kind::Function:
      return call(e.function(), child(e.argument()));
    case Kind::Power:
      return pow(child(e.base()), child(e.exponent()));
    case Kind::Product: {
      std::vector<Expression> ops;
      for (const auto& o : e.operands()) ops.push_back(child(o));
      return mul(std::move(ops));
    }
    case Kind::Sum: {
      std::vector<Expression> ops;
      for (const auto& o : e.operands()) ops.push_back(child(o));
      return add(std::move(ops));
    }
  }
  return e;
}

}  // namespace

Expression canonicalize(const Expression& e) {
  return rebuild(e, [](const Expression& c) { return canonicalize(c); });
}

// ---------------------------------------------------------------------------
// Expansion

namespace {

constexpr long kMaxExpandedPower = 64;

std::vector<Expression> terms_of(const Expression& e) {
  if (e.is(Kind::Sum)) return {e.operands().begin(), e.operands().end()};
  return {e};
}

Expression distribute(const std::vector<Expression>& factors) {
  std::vector<Expression> acc{one_expr()};
  for (const auto& f : factors) {
    if (!f.is(Kind::Sum)) {
      for (auto& a : acc) a = mul({a, f});
      continue;
    }
    std::vector<Expression> next;
    next.reserve(acc.size() * f.operands().size());
    for (const auto& a : acc) {
      for (const auto& t : f.operands()) next.push_back(mul({a, t}));
    }
    acc = std::move(next);
  }
  return add(std::move(acc));
}

}  // namespace

Expression expand(const Expression& e) {
  switch (e.kind()) {
    case Kind::Number:
    case Kind::Symbol:
    case Kind::Jet:
      return e;
    case Kind::Function:
      return call(e.function(), expand(e.argument()));
    case Kind::Sum: {
      std::vector<Expression> ops;
      for (const auto& o : e.operands()) ops.push_back(expand(o));
      return add(std::move(ops));
    }
    case Kind::Product: {
      std::vector<Expression> ops;
      for (const auto& o : e.operands()) ops.push_back(expand(o));
      Expression p = distribute(ops);
      // Merging like bases can expose new sums, e.g. (a+b)^(1/2) * (a+b)^(3/2).
      if (p.is(Kind::Product) &&
          std::any_of(p.operands().begin(), p.operands().end(), [](const Expression& f) {
            return f.is(Kind::Sum) || (f.is(Kind::Power) && f.base().is(Kind::Sum) && f.exponent().is_integer() &&
                                       f.exponent().value() > 0);
          })) {
        return expand(p);
      }
      return p;
    }
    case Kind::Power: {
      Expression b = expand(e.base());
      Expression x = expand(e.exponent());
      if (b.is(Kind::Sum) && x.is_integer() && x.value() > 0 && x.value() <= kMaxExpandedPower) {
        long n = x.value().get_num().get_si();
        std::vector<Expression> fs(static_cast<std::size_t>(n), b);
        return distribute(fs);
      }
      Expression p = pow(b, x);
      if (p != e && (p.is(Kind::Product) || p.is(Kind::Sum))) return expand(p);
      return p;
    }
  }
  return e;
}

// ---------------------------------------------------------------------------
// Atoms, differentiation, substitution

namespace {

void collect_atoms(const Expression& e, ExpressionSet& out) {
  if (e.is_atom()) {
    out.insert(e);
    return;
  }
  for (const auto& o : e.operands()) collect_atoms(o, out);
}

}  // namespace

ExpressionSet free_atoms(const Expression& e) {
  ExpressionSet out;
  collect_atoms(e, out);
  return out;
}

bool contains_any(const Expression& e, const std::function<bool(const Expression&)>& pred) {
  if (e.is_atom()) return pred(e);
  for (const auto& o : e.operands()) {
    if (contains_any(o, pred)) return true;
  }
  return false;
}

bool contains(const Expression& e, const Expression& atom) {
  return contains_any(e, [&](const Expression& a) { return a == atom; });
}

namespace {

Expression d_atom(const Expression& e, const Expression& var, const FunctionDependencies& deps) {
  if (e == var) return one_expr();
  if (!var.is(Kind::Symbol)) return zero_expr();
  auto it = deps.find(e.name());
  if (it == deps.end()) return zero_expr();
  if (std::find(it->second.begin(), it->second.end(), var.name()) == it->second.end()) return zero_expr();
  std::vector<std::string> idx = e.is(Kind::Jet) ? e.index() : std::vector<std::string>{};
  idx.push_back(var.name());
  return jet(e.name(), std::move(idx));
}

Expression diff(const Expression& e, const Expression& var, const FunctionDependencies& deps) {
  switch (e.kind()) {
    case Kind::Number:
      return zero_expr();
    case Kind::Symbol:
    case Kind::Jet:
      return d_atom(e, var, deps);
    case Kind::Sum: {
      std::vector<Expression> ts;
      for (const auto& o : e.operands()) ts.push_back(diff(o, var, deps));
      return add(std::move(ts));
    }
    case Kind::Product: {
      auto ops = e.operands();
      std::vector<Expression> ts;
      for (std::size_t i = 0; i < ops.size(); ++i) {
        Expression d = diff(ops[i], var, deps);
        if (d.is_zero()) continue;
        std::vector<Expression> fs(ops.begin(), ops.end());
        fs[i] = d;
        ts.push_back(mul(std::move(fs)));
      }
      return add(std::move(ts));
    }
    case Kind::Power: {
      const Expression& b = e.base();
      const Expression& x = e.exponent();
      Expression db = diff(b, var, deps);
      Expression dx = diff(x, var, deps);
      if (dx.is_zero()) {
        if (db.is_zero()) return zero_expr();
        return mul({x, pow(b, add({x, num(-1)})), db});
      }
      return mul({e, add({mul({dx, ln(b)}), mul({x, db, pow(b, num(-1))})})});
    }
    case Kind::Function: {
      const Expression& a = e.argument();
      Expression da = diff(a, var, deps);
      if (da.is_zero()) return zero_expr();
      switch (e.function()) {
        case Function::Exp:
          return mul({e, da});
        case Function::Ln:
          return mul({da, pow(a, num(-1))});
        case Function::Erf:
          return mul({num(2), pow(sym("pi"), num(-1, 2)), exp(mul({num(-1), pow(a, num(2))})), da});
        case Function::LambertW:
          return mul({e, pow(a, num(-1)), pow(add({one_expr(), e}), num(-1)), da});
        case Function::Sqrt:
          return mul({num(1, 2), pow(a, num(-1, 2)), da});
        case Function::Abs:
          return mul({e, pow(a, num(-1)), da});
      }
    }
  }
  return zero_expr();
}

}  // namespace

Expression differentiate(const Expression& e, const Expression& var, const FunctionDependencies& deps) {
  if (!var.is_atom()) throw InvalidArgument("differentiation variable must be a symbol or jet variable");
  return diff(e, var, deps);
}

Expression differentiate(const Expression& e, std::string_view var, const FunctionDependencies& deps) {
  return diff(e, sym(std::string(var)), deps);
}

Expression substitute(const Expression& e, const ExpressionMap<Expression>& replacements) {
  if (replacements.empty()) return e;
  if (e.is_atom()) {
    auto it = replacements.find(e);
    return it == replacements.end() ? e : it->second;
  }
  if (e.is_number()) return e;
  return rebuild(e, [&](const Expression& c) { return substitute(c, replacements); });
}

namespace {

Expression substitute_keys(const Expression& e, const Binding& b) {
  if (e.is_atom()) {
    auto it = b.find(e.key());
    if (it == b.end()) return e;
    if (const auto* ex = std::get_if<Expression>(&it->second)) return *ex;
    return num(Rational(std::get<double>(it->second)));
  }
  if (e.is_number()) return e;
  return rebuild(e, [&](const Expression& c) { return substitute_keys(c, b); });
}

}  // namespace

Expression substitute(const Expression& e, const Binding& b) {
  if (b.empty()) return e;
  return substitute_keys(e, b);
}

// ---------------------------------------------------------------------------
// Coefficient extraction

std::map<Monomial, Expression> expand_collect(const Expression& e, const std::vector<std::string>& vars) {
  auto var_index = [&](const Expression& atom) -> int {
    if (!atom.is_atom()) return -1;
    auto it = std::find(vars.begin(), vars.end(), atom.key());
    return it == vars.end() ? -1 : static_cast<int>(it - vars.begin());
  };
  auto offending = [&](const Expression& sub) -> std::optional<std::string> {
    std::optional<std::string> found;
    contains_any(sub, [&](const Expression& a) {
      if (var_index(a) >= 0) {
        found = a.key();
        return true;
      }
      return false;
    });
    return found;
  };

  std::map<Monomial, std::vector<Expression>> buckets;
  for (const auto& term : terms_of(expand(e))) {
    Monomial degree(vars.size(), 0);
    std::vector<Expression> coeff;
    std::vector<Expression> factors =
        term.is(Kind::Product) ? std::vector<Expression>(term.operands().begin(), term.operands().end())
                               : std::vector<Expression>{term};
    for (const auto& f : factors) {
      if (int i = var_index(f); i >= 0) {
        degree[static_cast<std::size_t>(i)] += 1;
        continue;
      }
      if (f.is(Kind::Power)) {
        if (int i = var_index(f.base()); i >= 0) {
          const Expression& x = f.exponent();
          if (!x.is_integer() || x.value() < 0) throw NonPolynomial(f.base().key());
          degree[static_cast<std::size_t>(i)] += static_cast<int>(x.value().get_num().get_si());
          continue;
        }
      }
      if (auto bad = offending(f)) throw NonPolynomial(*bad);
      coeff.push_back(f);
    }
    buckets[degree].push_back(mul(std::move(coeff)));
  }
  std::map<Monomial, Expression> out;
  for (auto& [deg, cs] : buckets) {
    Expression c = add(std::move(cs));
    if (!c.is_zero()) out.emplace(deg, std::move(c));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Numerics

double eval_numeric(const Expression& e, const Binding& b) {
  auto atoms = free_atoms(e);
  std::vector<std::string> names;
  std::vector<double> values;
  for (const auto& a : atoms) {
    auto it = b.find(a.key());
    if (it == b.end()) continue;
    names.push_back(a.key());
    if (const auto* d = std::get_if<double>(&it->second)) {
      values.push_back(*d);
    } else {
      Binding rest = b;
      rest.erase(a.key());
      values.push_back(eval_numeric(std::get<Expression>(it->second), rest));
    }
  }
  CompiledExpression f(e, names);
  return f(values);
}

ZeroVerdict zero_test(const Expression& e, unsigned long long seed,
                      const std::map<std::string, std::pair<double, double>, std::less<>>& ranges) {
  Expression x = expand(e);
  if (x.is_zero()) return ZeroVerdict::SymbolicallyZero;
  auto atoms = free_atoms(x);
  std::vector<std::string> names;
  for (const auto& a : atoms) names.push_back(a.key());
  CompiledExpression f(x, names);
  std::vector<CompiledExpression> terms;
  for (const auto& t : terms_of(x)) terms.emplace_back(t, names);

  std::mt19937_64 rng(seed);
  std::vector<double> point(names.size());
  int evaluated = 0;
  for (int attempt = 0; attempt < 200 && evaluated < 20; ++attempt) {
    for (std::size_t i = 0; i < names.size(); ++i) {
      auto it = ranges.find(names[i]);
      auto [lo, hi] = it == ranges.end() ? std::pair{0.1, 2.0} : it->second;
      point[i] = std::uniform_real_distribution<double>(lo, hi)(rng);
    }
    try {
      double v = f(point);
      double scale = 0.0;
      for (const auto& t : terms) scale += std::abs(t(point));
      if (std::abs(v) >= 1e-9 * std::max(1.0, scale)) return ZeroVerdict::NonZero;
      ++evaluated;
    } catch (const DomainError&) {
    }
  }
  return evaluated > 0 ? ZeroVerdict::ProbablyZero : ZeroVerdict::NonZero;
}

}  // namespace kppsym
