#pragma once

#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "kppsym/expr.hpp"

namespace kppsym {

/// Coordinates of a jet space: independent variables, dependent variables and
/// the highest derivative order that may appear.
struct JetSpace {
  std::vector<std::string> independent{"x", "t"};
  std::vector<std::string> dependent{"u"};
  int max_order = 2;

  /// Throws InvalidArgument on duplicate names or max_order < 1.
  void validate() const;

  bool is_independent(std::string_view name) const;
  bool is_dependent(std::string_view name) const;
  /// True for jet variables (order >= 1) of one of the dependent variables.
  bool is_derivative(const Expression& atom) const;
  /// Independent coordinates followed by dependent ones.
  std::vector<std::string> coordinates() const;

  /// Sorted multi-indices of exactly `order` over the independent variables.
  std::vector<std::vector<std::string>> multi_indices(int order) const;

  JetSpace with_max_order(int order) const;
};

/// Infinitesimal generator sum_c coeff[c] * d/dc over base coordinates.
/// Coefficients may involve unknown functions listed in `unknowns`.
class VectorField {
 public:
  VectorField() = default;
  VectorField(JetSpace space, std::map<std::string, Expression> coeffs, FunctionDependencies unknowns = {});

  const JetSpace& space() const { return space_; }
  const FunctionDependencies& unknowns() const { return unknowns_; }
  /// Non-zero coefficients keyed by coordinate name.
  const std::map<std::string, Expression>& coefficients() const { return coeffs_; }
  Expression coefficient(std::string_view coordinate) const;

  /// X(f) = sum_c X^c df/dc.
  Expression apply(const Expression& f) const;

  bool is_zero() const { return coeffs_.empty(); }

  friend VectorField operator+(const VectorField& a, const VectorField& b);
  friend VectorField operator*(const Expression& s, const VectorField& a);
  friend bool operator==(const VectorField& a, const VectorField& b);

 private:
  JetSpace space_;
  std::map<std::string, Expression> coeffs_;
  FunctionDependencies unknowns_;
};

/// Parses "4*x*t*dx + 4*t^2*dt - (2*t + x^2/eps)*u*du" using the markers
/// d<coordinate> for each coordinate of `space`.
VectorField parse_vector_field(std::string_view text, const JetSpace& space);
std::string to_string(const VectorField& X);

/// Generator with the jet coefficients of its prolongation.
struct ProlongedField {
  VectorField base;
  ExpressionMap<Expression> jet_coeffs;

  Expression coefficient(const Expression& jet_variable) const;
  /// pr X(f) for f involving jet variables up to the prolongation order.
  Expression apply(const Expression& f) const;
};

/// D_xi e = de/dxi + sum over u^a_J of u^a_{J,xi} de/du^a_J.
/// Throws OrderOverflow if a derivative beyond space.max_order would be needed.
Expression total_derivative(const Expression& e, std::string_view xi, const JetSpace& space,
                            const FunctionDependencies& deps = {});
/// Repeated total derivative along a multi-index.
Expression total_derivative(const Expression& e, const std::vector<std::string>& multi_index, const JetSpace& space,
                            const FunctionDependencies& deps = {});

/// Characteristic Q^a = phi^a - sum_i xi^i u^a_i.
Expression characteristic(const VectorField& X, std::string_view dependent);

/// phi^J_a = D_J Q^a + sum_i xi^i u^a_{J,i}.
Expression prolongation_coefficient(const VectorField& X, const Expression& jet_variable);

/// All jet coefficients up to `order` (defaults to the space's max_order).
ProlongedField prolong(const VectorField& X, int order = 2);
inline ProlongedField prolong2(const VectorField& X) { return prolong(X, 2); }

}  // namespace kppsym
