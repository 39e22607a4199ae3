#pragma once

// Symbolic expression kernel: immutable canonical trees over exact rationals,
// symbols, jet variables and a handful of named special functions.
//
// Every constructor in this header returns a canonical expression: sums and
// products are flattened, like terms and like bases are merged, rational
// constants are folded, and children are sorted by `compare`. Two
// expressions built from the same mathematical content through the same
// rewrite rules are therefore structurally equal.

#include <gmpxx.h>

#include <cstddef>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace kppsym {

using Integer = mpz_class;
using Rational = mpq_class;

/// Node kinds, listed in canonical sort order.
enum class Kind { Number, Symbol, Jet, Function, Power, Product, Sum };

enum class Function { Exp, Ln, Erf, LambertW, Sqrt, Abs };

std::string_view function_name(Function f);
std::optional<Function> function_from_name(std::string_view name);

namespace detail {
struct Node;
}

class Expression {
 public:
  /// The rational zero.
  Expression();
  Expression(int value);  // NOLINT(google-explicit-constructor)
  Expression(const Rational& value);  // NOLINT(google-explicit-constructor)

  Kind kind() const;
  bool is(Kind k) const { return kind() == k; }
  bool is_number() const { return is(Kind::Number); }
  bool is_atom() const { return is(Kind::Symbol) || is(Kind::Jet); }
  bool is_zero() const;
  bool is_one() const;
  bool is_integer() const;

  /// Number payload. Only valid for Kind::Number.
  const Rational& value() const;
  /// Symbol name, or the dependent variable of a jet variable.
  const std::string& name() const;
  /// Sorted multi-index of a jet variable.
  const std::vector<std::string>& index() const;
  Function function() const;
  /// Operands: function argument, (base, exponent), or sum/product children.
  std::span<const Expression> operands() const;
  const Expression& base() const;
  const Expression& exponent() const;
  const Expression& argument() const;

  /// Binding key of an atom: the symbol name or the printed jet variable.
  const std::string& key() const;
  std::size_t hash() const;

  friend bool operator==(const Expression& a, const Expression& b);
  friend bool operator!=(const Expression& a, const Expression& b) { return !(a == b); }

 private:
  explicit Expression(std::shared_ptr<const detail::Node> node) : node_(std::move(node)) {}
  const detail::Node& node() const { return *node_; }

  std::shared_ptr<const detail::Node> node_;

  friend struct ExpressionFactory;
  friend int compare(const Expression& a, const Expression& b);
};

/// Total order used for canonical sorting. Negative, zero or positive.
int compare(const Expression& a, const Expression& b);

struct ExpressionLess {
  bool operator()(const Expression& a, const Expression& b) const { return compare(a, b) < 0; }
};

struct ExpressionHash {
  std::size_t operator()(const Expression& e) const { return e.hash(); }
};

using ExpressionSet = std::set<Expression, ExpressionLess>;
template <class V>
using ExpressionMap = std::map<Expression, V, ExpressionLess>;

// Canonical constructors.
Expression num(const Rational& value);
Expression num(long numerator, long denominator);
Expression sym(std::string name);
/// Jet variable; an empty multi-index yields the plain symbol `dependent`.
Expression jet(std::string dependent, std::vector<std::string> index);
Expression call(Function f, const Expression& argument);
Expression pow(const Expression& base, const Expression& exponent);
Expression add(std::vector<Expression> terms);
Expression mul(std::vector<Expression> factors);

Expression exp(const Expression& e);
Expression ln(const Expression& e);
Expression erf(const Expression& e);
Expression lambert_w(const Expression& e);
Expression sqrt(const Expression& e);
Expression abs(const Expression& e);

Expression operator+(const Expression& a, const Expression& b);
Expression operator-(const Expression& a, const Expression& b);
Expression operator*(const Expression& a, const Expression& b);
Expression operator/(const Expression& a, const Expression& b);
Expression operator-(const Expression& a);

/// Non-canonicalizing constructors. Used to feed raw trees to `canonicalize`.
namespace unsimplified {
Expression sum(std::vector<Expression> terms);
Expression product(std::vector<Expression> factors);
Expression power(const Expression& base, const Expression& exponent);
Expression call(Function f, const Expression& argument);
}  // namespace unsimplified

/// Rebuilds `e` bottom-up through the canonical constructors.
Expression canonicalize(const Expression& e);

/// Splits a term into its rational coefficient and the remaining factor.
std::pair<Rational, Expression> split_coefficient(const Expression& term);

/// Full ring normalization: distributes products over sums and expands
/// positive integer powers of sums, recursively (function arguments included).
Expression expand(const Expression& e);

/// Symbols and jet variables occurring in `e`.
ExpressionSet free_atoms(const Expression& e);
bool contains(const Expression& e, const Expression& atom);
bool contains_any(const Expression& e, const std::function<bool(const Expression&)>& atom_predicate);

/// Argument lists of unknown functions. A jet variable or symbol whose name is
/// a key here is treated as a function of the listed symbols, so its partial
/// derivatives are jet variables again (f -> f_x -> f_xv ...).
using FunctionDependencies = std::map<std::string, std::vector<std::string>, std::less<>>;

/// Partial derivative with respect to an atom (symbol or jet variable).
/// Jet variables are independent coordinates unless listed in `deps`.
Expression differentiate(const Expression& e, const Expression& var, const FunctionDependencies& deps = {});
Expression differentiate(const Expression& e, std::string_view var, const FunctionDependencies& deps = {});

/// Symbolic or numeric value bound to a symbol or jet key.
using BindingValue = std::variant<Expression, double>;
using Binding = std::map<std::string, BindingValue, std::less<>>;

/// Simultaneous replacement of atoms by key, then re-canonicalization.
/// Numeric values enter the tree as the exact rational value of the double.
Expression substitute(const Expression& e, const Binding& b);
Expression substitute(const Expression& e, const ExpressionMap<Expression>& replacements);

/// Multi-degree of a monomial in the requested variables.
using Monomial = std::vector<int>;

/// Expands `e` and groups terms by their degree in `monomial_vars` (keys of
/// symbols or jet variables). Throws NonPolynomial if a variable occurs in a
/// function argument, a non-natural power, or a power of a sum.
std::map<Monomial, Expression> expand_collect(const Expression& e, const std::vector<std::string>& monomial_vars);

/// Double-precision evaluation. Unbound `pi` and `e` default to their
/// mathematical values. Throws UnboundSymbol or DomainError.
double eval_numeric(const Expression& e, const Binding& b);

enum class ZeroVerdict { SymbolicallyZero, ProbablyZero, NonZero };

/// Ring normalization followed, if that is inconclusive, by evaluation at
/// random points drawn from `sample_ranges` (default [0.1, 2] for every atom).
ZeroVerdict zero_test(const Expression& e, unsigned long long seed = 0,
                      const std::map<std::string, std::pair<double, double>, std::less<>>& sample_ranges = {});

std::string to_string(const Expression& e);
std::ostream& operator<<(std::ostream& os, const Expression& e);

/// Parses the textual expression grammar into a canonical expression.
Expression parse(std::string_view text);

/// Exact rational value of a decimal literal such as "0.7", "-3" or "2/5".
Rational parse_rational(std::string_view text);

}  // namespace kppsym
