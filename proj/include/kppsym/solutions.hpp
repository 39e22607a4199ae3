#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "kppsym/detsys.hpp"
#include "kppsym/expr.hpp"
#include "kppsym/jet.hpp"

namespace kppsym {

struct Exclusion {
  std::string label;
  std::function<bool(double x, double t)> excluded;
};

struct Grid {
  double x_lo = -2.0, x_hi = 2.0;
  double t_lo = 0.1, t_hi = 2.0;
  int nx = 50, nt = 50;
  std::vector<Exclusion> exclusions;

  /// Throws InvalidArgument unless nx, nt >= 2 and both ranges are finite.
  void validate() const;
  /// Excludes |x - center| < margin.
  Grid& exclude_x_near(double center, double margin);
};

enum class Provenance { PaperForm, CorrectedForm };
std::string to_string(Provenance p);

struct SolutionEntry {
  std::string id;
  /// Built-in equation name (heat, fisher, zeldovich, nws).
  std::string equation;
  /// u for exact solutions, v for split ones.
  Expression order0;
  /// w, absent for exact solutions.
  std::optional<Expression> order1;
  /// Exact values of the constants (a, c, c1, c2, ...).
  Binding params;
  Provenance provenance = Provenance::PaperForm;
  std::string notes;
  /// Whether the closed form itself depends on eps.
  bool uses_epsilon = false;
  Grid grid;
  double default_epsilon = 0.1;

  bool is_split() const { return order1.has_value(); }
  /// The system the entry must satisfy: the perturbed equation or its split.
  PDESystem system() const;
  /// order0 and order1 with the constants substituted.
  Expression bound_order0() const;
  std::optional<Expression> bound_order1() const;
};

const std::vector<SolutionEntry>& catalog();
std::vector<std::string> catalog_ids();
/// Looks up an id; "zeldovich_x3" resolves to the corrected form.
const SolutionEntry& find_entry(std::string_view id);

/// Substitutes u^a_J -> d^J sol_a for every jet variable in e.
Expression evaluate_on_solution(const Expression& e, const std::map<std::string, Expression>& solution);

/// Symbolic residual expressions (expanded), one per equation, in x, t, eps.
std::vector<Expression> residual_expressions(const SolutionEntry& entry);

struct ResidualReport {
  std::string entry_id;
  std::vector<std::string> equations;
  /// Per equation.
  std::vector<double> sup;
  std::vector<double> l2;
  double sup_norm = 0.0;
  /// Root mean square over the evaluated points, worst equation.
  double l2_norm = 0.0;
  int n_points = 0;
  int skipped = 0;
  double epsilon = 0.0;
  bool pass = false;
};

/// Verdict threshold for residual().
inline constexpr double kResidualTolerance = 1e-9;

/// Evaluates residual_expressions on the grid. A DomainError at a point
/// skips it; more than 20% skipped raises DomainError.
ResidualReport residual(const SolutionEntry& entry, const Grid& grid, double epsilon);
ResidualReport residual(const SolutionEntry& entry, double epsilon);

/// Defect u_t - eps*u_xx - R(u) of the full perturbed equation at u = v + eps*w.
Expression full_defect(const SolutionEntry& entry);

struct OrderScaling {
  std::vector<double> eps;
  std::vector<double> sup_norms;
  /// Slopes between consecutive points in log-log.
  std::vector<double> slopes;
  /// Least-squares slope, NaN when the entry is exact.
  double fitted_exponent = 0.0;
  bool exact = false;
};

/// Requires at least three strictly decreasing positive eps values.
OrderScaling order_scaling(const SolutionEntry& entry, const Grid& grid, const std::vector<double>& eps_list);

/// Closed-form flow of an affine generator: coordinate -> expression in the
/// coordinates and s. Throws NotAffine.
std::map<std::string, Expression> flow(const VectorField& X, const Expression& s);

/// Group action of the kpp3 groups on a split entry:
/// G1: t -> t - s, G2: x -> x - s, G3: x -> e^{-s} x and w scaled by e^{-2s}.
/// The default grid is moved along with the solution.
SolutionEntry transform_solution(const SolutionEntry& entry, int flow_index, double s);

/// Pairwise (fixed topology) sum, so reductions are reproducible.
double pairwise_sum(const double* values, std::size_t n);

}  // namespace kppsym
