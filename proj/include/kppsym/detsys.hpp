#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "kppsym/expr.hpp"
#include "kppsym/jet.hpp"

namespace kppsym {

/// Name of the small diffusion parameter in every built-in equation.
inline constexpr std::string_view kEpsilon = "eps";

/// One equation in solved form lhs = rhs, lhs a pure time derivative.
struct Equation {
  Expression lhs;
  Expression rhs;

  /// lhs - rhs.
  Expression delta() const { return lhs - rhs; }
};

struct PDESystem {
  JetSpace space;
  std::vector<Equation> equations;
  std::vector<std::string> parameters;

  /// Throws InvalidArgument unless every lhs is a pure t-derivative of a
  /// distinct dependent variable, no rhs contains a t-derivative of that
  /// order or higher, and every free symbol is a coordinate or parameter.
  void validate() const;

  PDESystem with_max_order(int order) const;
};

/// Builds and validates a system; dependents follow the order of the lhs.
PDESystem make_system(std::vector<Equation> equations, std::vector<std::string> parameters,
                      std::vector<std::string> independent = {"x", "t"});

/// Equation text: one "u_t = ..." per line, "param eps, a;" declarations,
/// '#' starts a comment. Undeclared free symbols are an error.
PDESystem parse_system(std::string_view text);
std::string to_string(const PDESystem& sys);

/// Replaces lhs jet variables and all their derivatives by total derivatives
/// of the corresponding rhs until none remain. Throws OrderOverflow.
Expression on_manifold(const Expression& e, const PDESystem& sys);

/// pr X(Delta_k) restricted to the equation manifold, expanded, one per equation.
std::vector<Expression> symmetry_residual(const VectorField& X, const PDESystem& sys);

/// True iff every symmetry residual is symbolically zero.
bool is_symmetry(const VectorField& X, const PDESystem& sys);

struct DeterminingSet {
  /// Unknown infinitesimals with their argument lists.
  FunctionDependencies unknowns;
  /// Coordinate carrying each unknown (xi -> x, tau -> t, phi -> u, ...).
  std::map<std::string, std::string> coordinate_of;
  /// Each must vanish identically; normalized and free of duplicates.
  std::vector<Expression> constraints;

  /// The generic generator sum_c unknown_c d/dc.
  VectorField generator(const JetSpace& space) const;
};

/// Unknown infinitesimal names: x -> xi, t -> tau, a single dependent -> phi,
/// several dependents -> phi1, phi2, ... in order.
std::map<std::string, std::string> infinitesimal_names(const JetSpace& space);

DeterminingSet generate_determining(const PDESystem& sys);

/// Replaces each unknown (and each of its derivatives) by a closed form given
/// per unknown name; returns the expanded constraints.
std::vector<Expression> substitute_unknowns(const DeterminingSet& set,
                                            const std::map<std::string, Expression>& closed_forms);

/// Scales a constraint so that its leading term has coefficient 1.
Expression normalize_constraint(const Expression& c);

struct NumericVerification {
  double max_abs_residual = 0.0;
  /// Largest sum of absolute term values at any evaluation point.
  double max_magnitude = 0.0;
  int trials = 0;
  int resamples = 0;
  bool pass = true;
};

/// Evaluates the symbolic residuals at `trials` random points. Parameters and
/// coordinates are drawn from [-2,-0.1] U [0.1,2], eps from [0.01,1]; a
/// singular draw is resampled at most 10 times per trial. Passes iff every
/// point has |residual| < 1e-9 (1 + magnitude).
NumericVerification verify_generator_numeric(const VectorField& X, const PDESystem& sys, int trials,
                                             std::uint64_t seed = 0);

/// Residual sampling shared with verify_generator_numeric.
NumericVerification verify_residuals_numeric(const std::vector<Expression>& residuals, int trials,
                                             std::uint64_t seed = 0);

}  // namespace kppsym
