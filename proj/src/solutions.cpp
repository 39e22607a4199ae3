#include "kppsym/solutions.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>

#include "kppsym/compiled.hpp"
#include "kppsym/errors.hpp"
#include "kppsym/perturb.hpp"

namespace kppsym {

void Grid::validate() const {
  if (nx < 2 || nt < 2) throw InvalidArgument("grid needs at least two points per direction");
  for (double v : {x_lo, x_hi, t_lo, t_hi}) {
    if (!std::isfinite(v)) throw InvalidArgument("grid ranges must be finite");
  }
  if (!(x_lo < x_hi) || !(t_lo < t_hi)) throw InvalidArgument("grid ranges must be non-empty");
}

Grid& Grid::exclude_x_near(double center, double margin) {
  exclusions.push_back({"|x - " + std::to_string(center) + "| < " + std::to_string(margin),
                        [center, margin](double x, double) { return std::fabs(x - center) < margin; }});
  return *this;
}

std::string to_string(Provenance p) { return p == Provenance::PaperForm ? "paper-form" : "corrected-form"; }

PDESystem SolutionEntry::system() const {
  PerturbedEquation p = builtin_equation(equation);
  return is_split() ? split_order1(p) : p.system();
}

Expression SolutionEntry::bound_order0() const { return substitute(order0, params); }

std::optional<Expression> SolutionEntry::bound_order1() const {
  if (!order1) return std::nullopt;
  return substitute(*order1, params);
}

const SolutionEntry& find_entry(std::string_view id) {
  std::string key(id);
  if (key == "zeldovich_x3") key = "zeldovich_x3/corrected";
  for (const auto& e : catalog()) {
    if (e.id == key) return e;
  }
  throw InvalidArgument("unknown catalog entry '" + std::string(id) + "'");
}

std::vector<std::string> catalog_ids() {
  std::vector<std::string> out;
  for (const auto& e : catalog()) out.push_back(e.id);
  return out;
}

Expression evaluate_on_solution(const Expression& e, const std::map<std::string, Expression>& solution) {
  ExpressionMap<Expression> repl;
  for (const auto& a : free_atoms(e)) {
    auto it = solution.find(a.name());
    if (it == solution.end()) continue;
    Expression v = it->second;
    if (a.is(Kind::Jet)) {
      for (const auto& var : a.index()) v = differentiate(v, var);
    }
    repl.emplace(a, v);
  }
  return substitute(e, repl);
}

namespace {

std::map<std::string, Expression> solution_map(const SolutionEntry& entry) {
  if (entry.is_split()) return {{"v", entry.bound_order0()}, {"w", *entry.bound_order1()}};
  return {{"u", entry.bound_order0()}};
}

struct GridValues {
  std::vector<double> sup, l2;
  int n_points = 0, skipped = 0;
};

GridValues evaluate_grid(const std::vector<Expression>& exprs, const Grid& grid, double epsilon) {
  grid.validate();
  const std::vector<std::string> vars{"x", "t", std::string(kEpsilon)};
  std::vector<CompiledExpression> programs;
  for (const auto& e : exprs) programs.emplace_back(e, vars);

  GridValues out;
  std::vector<std::vector<double>> squares(exprs.size());
  out.sup.assign(exprs.size(), 0.0);
  std::vector<double> values(exprs.size());
  for (int i = 0; i < grid.nx; ++i) {
    double x = grid.x_lo + (grid.x_hi - grid.x_lo) * i / (grid.nx - 1);
    for (int j = 0; j < grid.nt; ++j) {
      double t = grid.t_lo + (grid.t_hi - grid.t_lo) * j / (grid.nt - 1);
      if (std::any_of(grid.exclusions.begin(), grid.exclusions.end(),
                      [&](const Exclusion& ex) { return ex.excluded(x, t); })) {
        continue;
      }
      const double point[] = {x, t, epsilon};
      try {
        for (std::size_t k = 0; k < programs.size(); ++k) values[k] = programs[k](point);
      } catch (const DomainError&) {
        ++out.skipped;
        continue;
      }
      ++out.n_points;
      for (std::size_t k = 0; k < programs.size(); ++k) {
        out.sup[k] = std::max(out.sup[k], std::fabs(values[k]));
        squares[k].push_back(values[k] * values[k]);
      }
    }
  }
  int total = out.n_points + out.skipped;
  if (total == 0) throw InvalidArgument("every grid point is excluded");
  if (out.skipped * 5 > total) {
    throw DomainError(std::to_string(out.skipped) + " of " + std::to_string(total) +
                      " grid points are outside the domain of the solution");
  }
  for (const auto& sq : squares) {
    out.l2.push_back(out.n_points ? std::sqrt(pairwise_sum(sq.data(), sq.size()) / out.n_points) : 0.0);
  }
  return out;
}

}  // namespace

double pairwise_sum(const double* values, std::size_t n) {
  if (n == 0) return 0.0;
  if (n <= 8) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += values[i];
    return s;
  }
  std::size_t half = n / 2;
  return pairwise_sum(values, half) + pairwise_sum(values + half, n - half);
}

std::vector<Expression> residual_expressions(const SolutionEntry& entry) {
  auto sol = solution_map(entry);
  std::vector<Expression> out;
  for (const auto& eq : entry.system().equations) out.push_back(expand(substitute(evaluate_on_solution(eq.delta(), sol), entry.params)));
  return out;
}

ResidualReport residual(const SolutionEntry& entry, const Grid& grid, double epsilon) {
  if (!(epsilon > 0.0 && epsilon <= 1.0)) throw InvalidArgument("eps must lie in (0, 1]");
  ResidualReport r;
  r.entry_id = entry.id;
  r.epsilon = epsilon;
  for (const auto& eq : entry.system().equations) r.equations.push_back(to_string(eq.lhs) + " = " + to_string(eq.rhs));
  GridValues g = evaluate_grid(residual_expressions(entry), grid, epsilon);
  r.sup = g.sup;
  r.l2 = g.l2;
  r.sup_norm = *std::max_element(g.sup.begin(), g.sup.end());
  r.l2_norm = *std::max_element(g.l2.begin(), g.l2.end());
  r.n_points = g.n_points;
  r.skipped = g.skipped;
  r.pass = r.sup_norm < kResidualTolerance;
  return r;
}

ResidualReport residual(const SolutionEntry& entry, double epsilon) { return residual(entry, entry.grid, epsilon); }

Expression full_defect(const SolutionEntry& entry) {
  PerturbedEquation p = builtin_equation(entry.equation);
  Expression u = entry.bound_order0();
  if (entry.is_split()) u = u + sym(std::string(kEpsilon)) * *entry.bound_order1();
  return expand(substitute(evaluate_on_solution(p.system().equations[0].delta(), {{"u", u}}), entry.params));
}

OrderScaling order_scaling(const SolutionEntry& entry, const Grid& grid, const std::vector<double>& eps_list) {
  if (eps_list.size() < 3) throw InvalidArgument("order scaling needs at least three eps values");
  for (std::size_t i = 0; i < eps_list.size(); ++i) {
    if (!(eps_list[i] > 0.0 && eps_list[i] <= 1.0) || (i > 0 && !(eps_list[i] < eps_list[i - 1]))) {
      throw InvalidArgument("eps values must be decreasing and lie in (0, 1]");
    }
  }
  OrderScaling out;
  out.eps = eps_list;
  std::vector<Expression> defect{full_defect(entry)};
  for (double e : eps_list) out.sup_norms.push_back(evaluate_grid(defect, grid, e).sup[0]);
  out.exact = std::all_of(out.sup_norms.begin(), out.sup_norms.end(),
                          [](double s) { return s < kResidualTolerance; });
  if (out.exact) {
    out.fitted_exponent = std::numeric_limits<double>::quiet_NaN();
    return out;
  }
  std::vector<double> lx, ly;
  for (std::size_t i = 0; i < eps_list.size(); ++i) {
    lx.push_back(std::log(eps_list[i]));
    ly.push_back(std::log(std::max(out.sup_norms[i], std::numeric_limits<double>::min())));
  }
  for (std::size_t i = 1; i < lx.size(); ++i) out.slopes.push_back((ly[i] - ly[i - 1]) / (lx[i] - lx[i - 1]));
  double n = static_cast<double>(lx.size());
  double mx = pairwise_sum(lx.data(), lx.size()) / n, my = pairwise_sum(ly.data(), ly.size()) / n;
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    sxy += (lx[i] - mx) * (ly[i] - my);
    sxx += (lx[i] - mx) * (lx[i] - mx);
  }
  out.fitted_exponent = sxy / sxx;
  return out;
}

std::map<std::string, Expression> flow(const VectorField& X, const Expression& s) {
  const auto coords = X.space().coordinates();
  const std::size_t n = coords.size();
  std::vector<std::vector<Expression>> A(n, std::vector<Expression>(n));
  std::vector<Expression> b(n);
  bool diagonal = true;
  for (std::size_t k = 0; k < n; ++k) {
    std::map<Monomial, Expression> parts;
    try {
      parts = expand_collect(X.coefficient(coords[k]), coords);
    } catch (const NonPolynomial&) {
      throw NotAffine("coefficient of d" + coords[k] + " is not affine: " + to_string(X.coefficient(coords[k])));
    }
    for (const auto& [mono, c] : parts) {
      int degree = 0;
      std::size_t which = 0;
      for (std::size_t j = 0; j < mono.size(); ++j) {
        degree += mono[j];
        if (mono[j]) which = j;
      }
      if (degree > 1) {
        throw NotAffine("coefficient of d" + coords[k] + " is not affine: " + to_string(X.coefficient(coords[k])));
      }
      if (degree == 0) {
        b[k] = c;
      } else {
        A[k][which] = c;
        if (which != k) diagonal = false;
      }
    }
  }

  std::map<std::string, Expression> out;
  if (diagonal) {
    for (std::size_t k = 0; k < n; ++k) {
      Expression y = sym(coords[k]);
      const Expression& lam = A[k][k];
      if (lam.is_zero()) {
        out[coords[k]] = expand(y + b[k] * s);
      } else {
        Expression g = exp(lam * s);
        out[coords[k]] = expand(g * y + b[k] * (g - 1) / lam);
      }
    }
    return out;
  }

  // Nilpotent linear part: y(s) = sum s^n/n! A^n y + s^(n+1)/(n+1)! A^n b.
  auto mat_vec = [&](const std::vector<Expression>& v) {
    std::vector<Expression> r(n);
    for (std::size_t i = 0; i < n; ++i) {
      std::vector<Expression> terms;
      for (std::size_t j = 0; j < n; ++j) terms.push_back(A[i][j] * v[j]);
      r[i] = expand(add(std::move(terms)));
    }
    return r;
  };
  std::vector<Expression> cy(n), cb = b;
  std::vector<std::vector<Expression>> sums(n);
  for (std::size_t k = 0; k < n; ++k) {
    cy[k] = sym(coords[k]);
    sums[k] = {cy[k], b[k] * s};
  }
  Rational fact = 1;
  for (std::size_t order = 1; order <= n + 1; ++order) {
    cy = mat_vec(cy);
    cb = mat_vec(cb);
    bool zero = std::all_of(cy.begin(), cy.end(), [](const Expression& e) { return e.is_zero(); }) &&
                std::all_of(cb.begin(), cb.end(), [](const Expression& e) { return e.is_zero(); });
    if (zero) {
      for (std::size_t k = 0; k < n; ++k) out[coords[k]] = expand(add(sums[k]));
      return out;
    }
    fact *= static_cast<long>(order);
    for (std::size_t k = 0; k < n; ++k) {
      sums[k].push_back(pow(s, static_cast<int>(order)) * num(1 / fact) * cy[k]);
      sums[k].push_back(pow(s, static_cast<int>(order + 1)) * num(1 / (fact * static_cast<long>(order + 1))) * cb[k]);
    }
  }
  throw NotAffine("linear part of " + to_string(X) + " is neither diagonal nor nilpotent");
}

SolutionEntry transform_solution(const SolutionEntry& entry, int flow_index, double s) {
  if (!entry.is_split()) throw InvalidArgument("transform_solution needs a split (order-0/order-1) entry");
  if (!std::isfinite(s)) throw InvalidArgument("group parameter must be finite");
  // Shortest decimal form, so 0.3 acts as 3/10.
  char buf[512];
  auto res = std::to_chars(buf, buf + sizeof buf, s, std::chars_format::fixed);
  Expression S = res.ec == std::errc{} ? num(parse_rational(std::string_view(buf, static_cast<std::size_t>(res.ptr - buf))))
                                       : num(Rational(s));
  Expression x = sym("x"), t = sym("t");
  SolutionEntry out = entry;
  ExpressionMap<Expression> args;
  Expression scale = 1;
  switch (flow_index) {
    case 1:
      args.emplace(t, t - S);
      out.grid.t_lo += s;
      out.grid.t_hi += s;
      break;
    case 2:
      args.emplace(x, x - S);
      out.grid.x_lo += s;
      out.grid.x_hi += s;
      break;
    case 3:
      args.emplace(x, exp(-S) * x);
      scale = exp(-2 * S);
      out.grid.x_lo *= std::exp(s);
      out.grid.x_hi *= std::exp(s);
      break;
    default:
      throw InvalidArgument("flow index must be 1, 2 or 3");
  }
  // Exclusions follow the moved solution.
  for (auto& ex : out.grid.exclusions) {
    auto f = ex.excluded;
    if (flow_index == 1) ex.excluded = [f, s](double xx, double tt) { return f(xx, tt - s); };
    if (flow_index == 2) ex.excluded = [f, s](double xx, double tt) { return f(xx - s, tt); };
    if (flow_index == 3) ex.excluded = [f, s](double xx, double tt) { return f(std::exp(-s) * xx, tt); };
  }
  out.order0 = substitute(entry.order0, args);
  out.order1 = expand(scale * substitute(*entry.order1, args));
  out.id = entry.id + "@G" + std::to_string(flow_index) + "(" + to_string(S) + ")";
  out.notes = "image of " + entry.id + " under G" + std::to_string(flow_index);
  return out;
}

}  // namespace kppsym
