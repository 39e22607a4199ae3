#pragma once

#include <string>
#include <vector>

#include "kppsym/expr.hpp"
#include "kppsym/jet.hpp"

namespace kppsym {

/// [X,Y]^k = X(Y^k) - Y(X^k).
VectorField commutator(const VectorField& X, const VectorField& Y);

/// Coefficients (a_1..a_n) of sum a_i X_i; exact rationals or symbolic.
using AlgebraElement = std::vector<Expression>;

/// n x n matrix of expressions, indexed [row][column].
using Matrix = std::vector<std::vector<Expression>>;

struct LieAlgebra {
  std::vector<VectorField> basis;
  /// [X_i, X_j] = sum_k structure[i][j][k] X_k (0-based indices).
  std::vector<std::vector<std::vector<Rational>>> structure;

  std::size_t dim() const { return basis.size(); }
  AlgebraElement bracket(std::size_t i, std::size_t j) const;
  bool is_antisymmetric() const;
  bool satisfies_jacobi() const;
};

/// Expresses every commutator in the basis by an exact linear solve.
/// Throws NotClosed if one falls outside the span, InvalidArgument if the
/// basis is linearly dependent.
LieAlgebra structure_constants(const std::vector<VectorField>& basis);

/// Coordinates of X in the basis; throws NotClosed if X is outside the span.
AlgebraElement coordinates_in_basis(const VectorField& X, const std::vector<VectorField>& basis);

/// Ad(exp(s X_i)) Y = Y - s [X_i, Y] + s^2/2 [X_i, [X_i, Y]] - ... summed in
/// closed form (i is 0-based). Throws SeriesNotClosing.
AlgebraElement adjoint(const LieAlgebra& alg, std::size_t i, const Expression& s, const AlgebraElement& Y);

/// Row j holds the coordinates of Ad(exp(s X_i)) X_j.
Matrix adjoint_matrix(const LieAlgebra& alg, std::size_t i, const Expression& s);

/// M a, the matrix acting on the coefficient column.
AlgebraElement apply_columns(const Matrix& M, const AlgebraElement& a);
/// M^T a: the coefficients of Ad applied to sum a_j X_j under the row convention.
AlgebraElement apply_rows(const Matrix& M, const AlgebraElement& a);

AlgebraElement expand_all(const AlgebraElement& a);
bool is_zero(const AlgebraElement& a);
std::string to_string(const AlgebraElement& a, const std::string& label = "X");

/// The three-dimensional algebra dt, dx, x*dx - 2*w*dw on (x, t; v, w).
LieAlgebra kpp3();
JetSpace kpp3_space();

enum class OptimalCase { I, II, III };
std::string to_string(OptimalCase c);

struct AdjointStep {
  std::size_t index;  // 0-based generator
  Rational s;
};

struct Witness {
  std::vector<AdjointStep> steps;
  Rational scale;
};

struct CanonicalForm {
  OptimalCase which;
  std::vector<Rational> canonical;
  /// alpha for case ii, beta for case iii, unset for case i.
  Rational parameter;
  Witness witness;
};

/// One-dimensional optimal system of kpp3, following the case split
/// a2 != 0 -> alpha X1 + X2, else a3 != 0 -> beta X1 + X3, else X1.
/// Adjoint steps act on coefficient columns (apply_columns), the
/// convention under which the composed map is (a1, a2 e^{s2}, a3 - s1 a2).
/// Throws ZeroElement.
CanonicalForm canonicalize(const std::vector<Rational>& a);

/// The same classification under the genuine adjoint action (apply_rows):
/// a3 is invariant, so a3 != 0 -> beta X1 + X3, else a2 != 0 -> alpha X1 + X2.
CanonicalForm canonicalize_orbit(const std::vector<Rational>& a);

/// Replays a witness; `columns` selects apply_columns, else apply_rows.
std::vector<Rational> replay(const LieAlgebra& alg, const std::vector<Rational>& a, const Witness& w, bool columns);

/// Matrix text in a fixed-width grid.
std::string format_matrix(const Matrix& M);

}  // namespace kppsym
