#include "kppsym/liealg.hpp"

#include <algorithm>
#include <map>

#include "kppsym/errors.hpp"

namespace kppsym {

VectorField commutator(const VectorField& X, const VectorField& Y) {
  std::map<std::string, Expression> coeffs;
  for (const auto& c : X.space().coordinates()) {
    coeffs[c] = expand(X.apply(Y.coefficient(c)) - Y.apply(X.coefficient(c)));
  }
  FunctionDependencies deps = X.unknowns();
  deps.insert(Y.unknowns().begin(), Y.unknowns().end());
  return VectorField(X.space(), std::move(coeffs), std::move(deps));
}

namespace {

using Terms = std::map<std::string, Rational>;

// Vector field as a sparse vector over (coordinate, monomial) keys.
Terms flatten(const VectorField& X) {
  Terms out;
  for (const auto& [c, k] : X.coefficients()) {
    Expression e = expand(k);
    auto add_term = [&](const Expression& t) {
      auto [q, rest] = split_coefficient(t);
      out[c + "|" + to_string(rest)] += q;
    };
    if (e.is(Kind::Sum)) {
      for (const auto& t : e.operands()) add_term(t);
    } else {
      add_term(e);
    }
  }
  for (auto it = out.begin(); it != out.end();) it = it->second == 0 ? out.erase(it) : std::next(it);
  return out;
}

// Solves sum_j x_j columns[j] = target exactly; nullopt if inconsistent.
std::optional<std::vector<Rational>> solve(const std::vector<Terms>& columns, const Terms& target) {
  std::vector<std::string> keys;
  for (const auto& col : columns) {
    for (const auto& [k, v] : col) keys.push_back(k);
  }
  for (const auto& [k, v] : target) keys.push_back(k);
  std::sort(keys.begin(), keys.end());
  keys.erase(std::unique(keys.begin(), keys.end()), keys.end());

  const std::size_t n = columns.size();
  std::vector<std::vector<Rational>> m(keys.size(), std::vector<Rational>(n + 1));
  for (std::size_t r = 0; r < keys.size(); ++r) {
    for (std::size_t j = 0; j < n; ++j) {
      auto it = columns[j].find(keys[r]);
      if (it != columns[j].end()) m[r][j] = it->second;
    }
    auto it = target.find(keys[r]);
    if (it != target.end()) m[r][n] = it->second;
  }

  std::size_t row = 0;
  std::vector<std::size_t> pivots;
  for (std::size_t j = 0; j < n && row < m.size(); ++j) {
    std::size_t p = row;
    while (p < m.size() && m[p][j] == 0) ++p;
    if (p == m.size()) continue;
    std::swap(m[p], m[row]);
    Rational inv = 1 / m[row][j];
    for (auto& x : m[row]) x *= inv;
    for (std::size_t r = 0; r < m.size(); ++r) {
      if (r == row || m[r][j] == 0) continue;
      Rational f = m[r][j];
      for (std::size_t c = j; c <= n; ++c) m[r][c] -= f * m[row][c];
    }
    pivots.push_back(j);
    ++row;
  }
  if (pivots.size() != n) throw InvalidArgument("basis vector fields are linearly dependent");
  for (std::size_t r = row; r < m.size(); ++r) {
    if (m[r][n] != 0) return std::nullopt;
  }
  std::vector<Rational> x(n);
  for (std::size_t r = 0; r < pivots.size(); ++r) x[pivots[r]] = m[r][n];
  return x;
}

std::vector<Terms> flatten_all(const std::vector<VectorField>& basis) {
  std::vector<Terms> out;
  for (const auto& b : basis) out.push_back(flatten(b));
  return out;
}

Rational factorial(int n) {
  Rational f = 1;
  for (int k = 2; k <= n; ++k) f *= k;
  return f;
}

}  // namespace

AlgebraElement coordinates_in_basis(const VectorField& X, const std::vector<VectorField>& basis) {
  auto x = solve(flatten_all(basis), flatten(X));
  if (!x) throw NotClosed(to_string(X) + " is not in the span of the basis");
  return AlgebraElement(x->begin(), x->end());
}

LieAlgebra structure_constants(const std::vector<VectorField>& basis) {
  LieAlgebra alg;
  alg.basis = basis;
  const std::size_t n = basis.size();
  auto cols = flatten_all(basis);
  alg.structure.assign(n, std::vector<std::vector<Rational>>(n, std::vector<Rational>(n)));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      VectorField c = commutator(basis[i], basis[j]);
      auto x = solve(cols, flatten(c));
      if (!x) {
        throw NotClosed("[X" + std::to_string(i + 1) + ",X" + std::to_string(j + 1) + "] = " + to_string(c) +
                        " is not in the span of the basis");
      }
      for (std::size_t k = 0; k < n; ++k) {
        alg.structure[i][j][k] = (*x)[k];
        alg.structure[j][i][k] = -(*x)[k];
      }
    }
  }
  return alg;
}

AlgebraElement LieAlgebra::bracket(std::size_t i, std::size_t j) const {
  AlgebraElement out;
  for (const auto& q : structure.at(i).at(j)) out.push_back(num(q));
  return out;
}

bool LieAlgebra::is_antisymmetric() const {
  const std::size_t n = dim();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      for (std::size_t k = 0; k < n; ++k) {
        if (structure[i][j][k] != -structure[j][i][k]) return false;
      }
    }
  }
  return true;
}

bool LieAlgebra::satisfies_jacobi() const {
  const std::size_t n = dim();
  // sum over cyclic (i,j,k) of c[j][k][l] c[i][l][m] = 0
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      for (std::size_t k = 0; k < n; ++k) {
        for (std::size_t m = 0; m < n; ++m) {
          Rational total = 0;
          for (std::size_t l = 0; l < n; ++l) {
            total += structure[j][k][l] * structure[i][l][m] + structure[k][i][l] * structure[j][l][m] +
                     structure[i][j][l] * structure[k][l][m];
          }
          if (total != 0) return false;
        }
      }
    }
  }
  return true;
}

AlgebraElement adjoint(const LieAlgebra& alg, std::size_t i, const Expression& s, const AlgebraElement& Y) {
  const std::size_t n = alg.dim();
  if (i >= n || Y.size() != n) throw InvalidArgument("adjoint: index or element size does not match the algebra");
  // (ad_{X_i} y)_k = sum_j A[k][j] y_j
  std::vector<std::vector<Rational>> A(n, std::vector<Rational>(n));
  bool diagonal = true;
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t j = 0; j < n; ++j) {
      A[k][j] = alg.structure[i][j][k];
      if (k != j && A[k][j] != 0) diagonal = false;
    }
  }
  auto apply = [&](const AlgebraElement& y) {
    AlgebraElement out(n);
    for (std::size_t k = 0; k < n; ++k) {
      std::vector<Expression> terms;
      for (std::size_t j = 0; j < n; ++j) {
        if (A[k][j] != 0) terms.push_back(num(A[k][j]) * y[j]);
      }
      out[k] = expand(add(std::move(terms)));
    }
    return out;
  };

  if (diagonal) {
    AlgebraElement out(n);
    for (std::size_t k = 0; k < n; ++k) out[k] = expand(Y[k] * exp(-(num(A[k][k]) * s)));
    return out;
  }

  AlgebraElement cur = Y;
  std::vector<std::vector<Expression>> sums(n);
  for (std::size_t k = 0; k < n; ++k) sums[k].push_back(Y[k]);
  for (int order = 1; order <= 50; ++order) {
    AlgebraElement next = apply(cur);
    if (is_zero(next)) {
      AlgebraElement out(n);
      for (std::size_t k = 0; k < n; ++k) out[k] = expand(add(sums[k]));
      return out;
    }
    if (order == 1) {
      // Eigenvector: ad y = lambda y sums to exp(-lambda s) y.
      std::optional<Expression> lambda;
      bool eigen = true;
      for (std::size_t k = 0; k < n && eigen; ++k) {
        if (Y[k].is_zero()) {
          eigen = next[k].is_zero();
          continue;
        }
        Expression r = expand(next[k] / Y[k]);
        if (!r.is_number() || (lambda && *lambda != r)) eigen = false;
        lambda = r;
      }
      if (eigen && lambda) {
        AlgebraElement out(n);
        for (std::size_t k = 0; k < n; ++k) out[k] = expand(Y[k] * exp(-(*lambda * s)));
        return out;
      }
    }
    Expression c = pow(-s, order) / num(factorial(order));
    for (std::size_t k = 0; k < n; ++k) {
      if (!next[k].is_zero()) sums[k].push_back(c * next[k]);
    }
    cur = std::move(next);
  }
  throw SeriesNotClosing("adjoint series of X" + std::to_string(i + 1) + " does not close in 50 terms");
}

Matrix adjoint_matrix(const LieAlgebra& alg, std::size_t i, const Expression& s) {
  const std::size_t n = alg.dim();
  Matrix M;
  for (std::size_t j = 0; j < n; ++j) {
    AlgebraElement e(n, Expression{});
    e[j] = 1;
    M.push_back(adjoint(alg, i, s, e));
  }
  return M;
}

AlgebraElement apply_columns(const Matrix& M, const AlgebraElement& a) {
  AlgebraElement out(M.size());
  for (std::size_t r = 0; r < M.size(); ++r) {
    std::vector<Expression> terms;
    for (std::size_t c = 0; c < a.size(); ++c) terms.push_back(M[r][c] * a[c]);
    out[r] = expand(add(std::move(terms)));
  }
  return out;
}

AlgebraElement apply_rows(const Matrix& M, const AlgebraElement& a) {
  AlgebraElement out(M.empty() ? 0 : M[0].size());
  for (std::size_t c = 0; c < out.size(); ++c) {
    std::vector<Expression> terms;
    for (std::size_t r = 0; r < a.size(); ++r) terms.push_back(M[r][c] * a[r]);
    out[c] = expand(add(std::move(terms)));
  }
  return out;
}

AlgebraElement expand_all(const AlgebraElement& a) {
  AlgebraElement out;
  for (const auto& e : a) out.push_back(expand(e));
  return out;
}

bool is_zero(const AlgebraElement& a) {
  return std::all_of(a.begin(), a.end(), [](const Expression& e) { return expand(e).is_zero(); });
}

std::string to_string(const AlgebraElement& a, const std::string& label) {
  std::string out;
  for (std::size_t k = 0; k < a.size(); ++k) {
    Expression c = expand(a[k]);
    if (c.is_zero()) continue;
    bool negative = !c.is(Kind::Sum) && split_coefficient(c).first < 0;
    if (negative) c = -c;
    if (out.empty()) {
      out = negative ? "-" : "";
    } else {
      out += negative ? " - " : " + ";
    }
    if (!c.is_one()) out += c.is(Kind::Sum) ? "(" + to_string(c) + ")*" : to_string(c) + "*";
    out += label + std::to_string(k + 1);
  }
  return out.empty() ? "0" : out;
}

JetSpace kpp3_space() { return JetSpace{{"x", "t"}, {"v", "w"}, 2}; }

LieAlgebra kpp3() {
  JetSpace s = kpp3_space();
  return structure_constants({parse_vector_field("dt", s), parse_vector_field("dx", s),
                              parse_vector_field("x*dx - 2*w*dw", s)});
}

std::string to_string(OptimalCase c) {
  switch (c) {
    case OptimalCase::I:
      return "i";
    case OptimalCase::II:
      return "ii";
    case OptimalCase::III:
      return "iii";
  }
  return "?";
}

namespace {

void check_triple(const std::vector<Rational>& a) {
  if (a.size() != 3) throw InvalidArgument("expected three coefficients");
  if (a[0] == 0 && a[1] == 0 && a[2] == 0) throw ZeroElement();
}

CanonicalForm scaled(OptimalCase which, const std::vector<Rational>& a, std::size_t lead, std::vector<AdjointStep> steps) {
  CanonicalForm f;
  f.which = which;
  f.witness.steps = std::move(steps);
  f.witness.scale = 1 / a[lead];
  f.canonical = {0, 0, 0};
  f.canonical[lead] = 1;
  f.canonical[0] = which == OptimalCase::I ? Rational(1) : a[0] / a[lead];
  f.parameter = which == OptimalCase::I ? Rational(0) : f.canonical[0];
  return f;
}

}  // namespace

CanonicalForm canonicalize(const std::vector<Rational>& a) {
  check_triple(a);
  if (a[1] != 0) {
    Rational s = a[2] / a[1];
    auto f = scaled(OptimalCase::II, a, 1, {});
    if (s != 0) f.witness.steps.push_back({1, s});
    return f;
  }
  if (a[2] != 0) return scaled(OptimalCase::III, a, 2, {});
  return scaled(OptimalCase::I, a, 0, {});
}

CanonicalForm canonicalize_orbit(const std::vector<Rational>& a) {
  check_triple(a);
  if (a[2] != 0) {
    Rational s = a[1] / a[2];
    auto f = scaled(OptimalCase::III, a, 2, {});
    if (s != 0) f.witness.steps.push_back({1, s});
    return f;
  }
  if (a[1] != 0) return scaled(OptimalCase::II, a, 1, {});
  return scaled(OptimalCase::I, a, 0, {});
}

std::vector<Rational> replay(const LieAlgebra& alg, const std::vector<Rational>& a, const Witness& w, bool columns) {
  AlgebraElement cur;
  for (const auto& q : a) cur.push_back(num(q));
  for (const auto& step : w.steps) {
    Matrix M = adjoint_matrix(alg, step.index, num(step.s));
    cur = columns ? apply_columns(M, cur) : apply_rows(M, cur);
  }
  std::vector<Rational> out;
  for (const auto& e : cur) {
    Expression v = expand(e * num(w.scale));
    if (!v.is_number()) throw InvalidArgument("witness replay left a non-rational coefficient: " + to_string(v));
    out.push_back(v.value());
  }
  return out;
}

std::string format_matrix(const Matrix& M) {
  std::vector<std::vector<std::string>> cells;
  std::size_t width = 1;
  for (const auto& row : M) {
    std::vector<std::string> r;
    for (const auto& e : row) {
      r.push_back(to_string(e));
      width = std::max(width, r.back().size());
    }
    cells.push_back(std::move(r));
  }
  std::string out;
  for (const auto& r : cells) {
    out += "[";
    for (std::size_t c = 0; c < r.size(); ++c) {
      out += (c ? "  " : " ") + std::string(width - r[c].size(), ' ') + r[c];
    }
    out += " ]\n";
  }
  return out;
}

}  // namespace kppsym
