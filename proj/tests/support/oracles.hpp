#pragma once

// Independent reference computations used by the tests and the acceptance
// binary. None of these route through the code path they check.

#include <functional>
#include <random>
#include <utility>
#include <vector>

#include "kppsym/expr.hpp"
#include "kppsym/jet.hpp"

namespace oracle {

/// erf from its Maclaurin series summed in 512-bit floating point.
double erf_series(double x);

/// phi^{J,i} = D_i phi^J - sum_k (D_i xi^k) u_{J,k}, starting from phi.
kppsym::Expression recursive_prolongation(const kppsym::VectorField& X, const kppsym::Expression& jet);

/// Coefficients in eps of (v + eps*w) * (1 - (v + eps*w)) by convolution.
std::vector<kppsym::Expression> logistic_eps_coefficients();

/// Coefficient of eps^1 in R(v + eps*w) from exact evaluation at eps = 0..deg
/// and Lagrange interpolation; R given as a rational function of one argument.
kppsym::Rational eps1_coefficient(const std::function<kppsym::Rational(const kppsym::Rational&)>& R, int degree,
                                  const kppsym::Rational& v, const kppsym::Rational& w);

/// Newton solve for (k, omega) making (1 + exp(k x - omega t))^-2 solve
/// u_t = eps u_xx + a u (1 - u) at two sample points, derivatives by hand.
std::pair<double, double> az_parameters(double a, double eps);

/// Classical RK4 for v' = v^2 (1 - v) from (t0, v0) to t1.
double zeldovich_order0(double v0, double t0, double t1, int steps = 4000);

/// eps^2 coefficient of the full defect for the two split entries, from the
/// Taylor remainder -(w_xx + R''(v) w^2 / 2) written out by hand.
double fisher_x3_eps2(double x, double t);  // a = c1 = c2 = 1
double nws_x3_eps2(double x, double t);     // c1 = c2 = 1, w without x dependence

/// Random expression trees.
class ExpressionGenerator {
 public:
  explicit ExpressionGenerator(std::uint64_t seed, std::vector<std::string> symbols = {"x", "y", "z"});

  /// Raw (unsimplified) tree over symbols, jets, rationals and functions.
  kppsym::Expression raw(int depth);
  /// Canonical tree.
  kppsym::Expression canonical(int depth) { return kppsym::canonicalize(raw(depth)); }
  /// Smooth tree on (0.5, 1.5)^n for derivative checks: no abs, ln only of
  /// positive sums, bounded exponents.
  kppsym::Expression smooth(int depth);
  kppsym::Rational rational(int max_num = 5, int max_den = 4);
  std::mt19937_64& rng() { return rng_; }

 private:
  std::mt19937_64 rng_;
  std::vector<std::string> symbols_;
  int pick(int n);
};

}  // namespace oracle
