#include "kppsym/jet.hpp"

#include <algorithm>
#include <set>

#include "kppsym/errors.hpp"

namespace kppsym {

void JetSpace::validate() const {
  std::set<std::string> seen;
  for (const auto& n : coordinates()) {
    if (n.empty() || !seen.insert(n).second) throw InvalidArgument("jet space names must be distinct: '" + n + "'");
  }
  if (max_order < 1) throw InvalidArgument("jet space max_order must be at least 1");
}

bool JetSpace::is_independent(std::string_view name) const {
  return std::find(independent.begin(), independent.end(), name) != independent.end();
}

bool JetSpace::is_dependent(std::string_view name) const {
  return std::find(dependent.begin(), dependent.end(), name) != dependent.end();
}

bool JetSpace::is_derivative(const Expression& atom) const { return atom.is(Kind::Jet) && is_dependent(atom.name()); }

std::vector<std::string> JetSpace::coordinates() const {
  std::vector<std::string> out = independent;
  out.insert(out.end(), dependent.begin(), dependent.end());
  return out;
}

std::vector<std::vector<std::string>> JetSpace::multi_indices(int order) const {
  std::vector<std::vector<std::string>> out{{}};
  for (int k = 0; k < order; ++k) {
    std::vector<std::vector<std::string>> next;
    for (const auto& idx : out) {
      // Non-decreasing position in `independent` keeps each multiset once.
      std::size_t from = 0;
      if (!idx.empty()) {
        from = static_cast<std::size_t>(std::find(independent.begin(), independent.end(), idx.back()) -
                                        independent.begin());
      }
      for (std::size_t i = from; i < independent.size(); ++i) {
        auto grown = idx;
        grown.push_back(independent[i]);
        next.push_back(std::move(grown));
      }
    }
    out = std::move(next);
  }
  for (auto& idx : out) std::sort(idx.begin(), idx.end());
  return out;
}

JetSpace JetSpace::with_max_order(int order) const {
  JetSpace s = *this;
  s.max_order = order;
  return s;
}

// ---------------------------------------------------------------------------

VectorField::VectorField(JetSpace space, std::map<std::string, Expression> coeffs, FunctionDependencies unknowns)
    : space_(std::move(space)), unknowns_(std::move(unknowns)) {
  space_.validate();
  for (auto& [c, e] : coeffs) {
    if (!space_.is_independent(c) && !space_.is_dependent(c)) {
      throw InvalidArgument("vector field coefficient for unknown coordinate '" + c + "'");
    }
    if (contains_any(e, [&](const Expression& a) { return space_.is_derivative(a); })) {
      throw InvalidArgument("vector field coefficient depends on jet variables: " + to_string(e));
    }
    if (!e.is_zero()) coeffs_.emplace(c, e);
  }
}

Expression VectorField::coefficient(std::string_view coordinate) const {
  auto it = coeffs_.find(std::string(coordinate));
  return it == coeffs_.end() ? Expression{} : it->second;
}

Expression VectorField::apply(const Expression& f) const {
  std::vector<Expression> terms;
  for (const auto& [c, k] : coeffs_) terms.push_back(k * differentiate(f, c, unknowns_));
  return add(std::move(terms));
}

VectorField operator+(const VectorField& a, const VectorField& b) {
  std::map<std::string, Expression> sum = a.coeffs_;
  for (const auto& [c, k] : b.coeffs_) sum[c] = expand(sum[c] + k);
  FunctionDependencies deps = a.unknowns_;
  deps.insert(b.unknowns_.begin(), b.unknowns_.end());
  return VectorField(a.space_, std::move(sum), std::move(deps));
}

VectorField operator*(const Expression& s, const VectorField& a) {
  std::map<std::string, Expression> scaled;
  for (const auto& [c, k] : a.coeffs_) scaled[c] = expand(s * k);
  return VectorField(a.space_, std::move(scaled), a.unknowns_);
}

bool operator==(const VectorField& a, const VectorField& b) {
  std::set<std::string> coords;
  for (const auto& [c, k] : a.coeffs_) coords.insert(c);
  for (const auto& [c, k] : b.coeffs_) coords.insert(c);
  for (const auto& c : coords) {
    if (!expand(a.coefficient(c) - b.coefficient(c)).is_zero()) return false;
  }
  return true;
}

VectorField parse_vector_field(std::string_view text, const JetSpace& space) {
  Expression e = parse(text);
  std::vector<std::string> coords = space.coordinates();
  std::vector<std::string> markers;
  for (const auto& c : coords) markers.push_back("d" + c);
  std::map<std::string, Expression> coeffs;
  for (const auto& [deg, coeff] : expand_collect(e, markers)) {
    int total = 0;
    std::size_t which = 0;
    for (std::size_t i = 0; i < deg.size(); ++i) {
      total += deg[i];
      if (deg[i] == 1) which = i;
    }
    if (total != 1) {
      throw InvalidArgument("vector field must be linear in the markers d<coordinate>: " + std::string(text));
    }
    coeffs[coords[which]] = coeff;
  }
  return VectorField(space, std::move(coeffs));
}

std::string to_string(const VectorField& X) {
  if (X.is_zero()) return "0";
  std::string out;
  for (const auto& c : X.space().coordinates()) {
    Expression k = X.coefficient(c);
    if (k.is_zero()) continue;
    bool negative = !k.is(Kind::Sum) && split_coefficient(k).first < 0;
    if (negative) k = -k;
    if (out.empty()) {
      out = negative ? "-" : "";
    } else {
      out += negative ? " - " : " + ";
    }
    if (!k.is_one()) out += k.is(Kind::Sum) ? "(" + to_string(k) + ")*" : to_string(k) + "*";
    out += "d" + c;
  }
  return out;
}

// ---------------------------------------------------------------------------

Expression total_derivative(const Expression& e, std::string_view xi, const JetSpace& space,
                            const FunctionDependencies& deps) {
  std::vector<Expression> terms{differentiate(e, xi, deps)};
  for (const auto& dep : space.dependent) {
    Expression d = differentiate(e, dep, deps);
    if (!d.is_zero()) terms.push_back(d * jet(dep, {std::string(xi)}));
  }
  for (const auto& atom : free_atoms(e)) {
    if (!space.is_derivative(atom)) continue;
    if (static_cast<int>(atom.index().size()) + 1 > space.max_order) {
      throw OrderOverflow("total derivative of " + atom.key() + " exceeds order " + std::to_string(space.max_order));
    }
    auto idx = atom.index();
    idx.emplace_back(xi);
    terms.push_back(differentiate(e, atom, deps) * jet(atom.name(), std::move(idx)));
  }
  return add(std::move(terms));
}

Expression total_derivative(const Expression& e, const std::vector<std::string>& multi_index, const JetSpace& space,
                            const FunctionDependencies& deps) {
  Expression out = e;
  for (const auto& v : multi_index) out = total_derivative(out, v, space, deps);
  return out;
}

Expression characteristic(const VectorField& X, std::string_view dependent) {
  std::vector<Expression> terms{X.coefficient(dependent)};
  for (const auto& xi : X.space().independent) {
    terms.push_back(-(X.coefficient(xi) * jet(std::string(dependent), {xi})));
  }
  return add(std::move(terms));
}

Expression prolongation_coefficient(const VectorField& X, const Expression& jet_variable) {
  const JetSpace& space = X.space();
  if (!space.is_derivative(jet_variable)) {
    throw InvalidArgument("not a jet variable of the space: " + to_string(jet_variable));
  }
  const auto& index = jet_variable.index();
  JetSpace work = space.with_max_order(std::max(space.max_order, static_cast<int>(index.size()) + 1));
  Expression q = characteristic(X, jet_variable.name());
  std::vector<Expression> terms{total_derivative(q, index, work, X.unknowns())};
  for (const auto& xi : space.independent) {
    auto idx = index;
    idx.push_back(xi);
    terms.push_back(X.coefficient(xi) * jet(jet_variable.name(), std::move(idx)));
  }
  return expand(add(std::move(terms)));
}

ProlongedField prolong(const VectorField& X, int order) {
  ProlongedField out{X, {}};
  for (int k = 1; k <= order; ++k) {
    for (const auto& idx : X.space().multi_indices(k)) {
      for (const auto& dep : X.space().dependent) {
        Expression j = jet(dep, idx);
        out.jet_coeffs.emplace(j, prolongation_coefficient(X, j));
      }
    }
  }
  return out;
}

Expression ProlongedField::coefficient(const Expression& jet_variable) const {
  auto it = jet_coeffs.find(jet_variable);
  if (it == jet_coeffs.end()) {
    throw OrderOverflow("prolongation does not cover " + to_string(jet_variable));
  }
  return it->second;
}

Expression ProlongedField::apply(const Expression& f) const {
  std::vector<Expression> terms{base.apply(f)};
  for (const auto& atom : free_atoms(f)) {
    if (!base.space().is_derivative(atom)) continue;
    terms.push_back(coefficient(atom) * differentiate(f, atom));
  }
  return add(std::move(terms));
}

}  // namespace kppsym
