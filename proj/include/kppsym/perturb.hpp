#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "kppsym/detsys.hpp"
#include "kppsym/expr.hpp"

namespace kppsym {

/// u_t = eps*u_xx + R(u).
struct PerturbedEquation {
  std::string name;
  Expression reaction;
  std::vector<std::string> parameters;  // besides eps

  /// Throws NonPolynomial unless R is a polynomial in u, InvalidArgument if it
  /// contains eps.
  void validate() const;
  PDESystem system() const;
};

/// heat (R = 0), fisher, zeldovich, nws.
PerturbedEquation builtin_equation(std::string_view name);
std::vector<std::string> builtin_equation_names();

/// Substitutes u = v + eps*w, expands and keeps the eps^0 and eps^1 parts:
/// v_t = R(v), w_t = v_xx + R'(v) w.
PDESystem split_order1(const PerturbedEquation& p, int order = 1);

/// The split system exactly as printed in the reference analysis, as a list
/// of expressions Delta = 0 (order 0 first), with a flag per line telling
/// whether the printed line disagrees with the derivation.
struct PrintedSplit {
  std::vector<Expression> deltas;
  std::vector<bool> typo;
  std::vector<std::string> notes;
};
/// Only fisher and zeldovich have a printed split.
PrintedSplit printed_split(std::string_view name);

/// Remainder u_t - eps*u_xx - R(u) at u = v + eps*w after removing the two
/// order equations; every term carries eps^2 or higher.
Expression split_remainder(const PerturbedEquation& p);

/// Built-in systems: heat, fisher, zeldovich, nws (single perturbed
/// equations) and fisher-split, zeldovich-split, nws-split.
PDESystem builtin_system(std::string_view name);
std::vector<std::string> builtin_system_names();

}  // namespace kppsym
