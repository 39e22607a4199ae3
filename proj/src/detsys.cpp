#include "kppsym/detsys.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <set>
#include <sstream>

#include "kppsym/compiled.hpp"
#include "kppsym/errors.hpp"

namespace kppsym {

namespace {

int count_t(const std::vector<std::string>& index) {
  return static_cast<int>(std::count(index.begin(), index.end(), "t"));
}

int jet_order(const Expression& e, const JetSpace& space) {
  int order = 0;
  for (const auto& a : free_atoms(e)) {
    if (space.is_derivative(a)) order = std::max(order, static_cast<int>(a.index().size()));
  }
  return order;
}

std::string trim(std::string_view s) {
  auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  auto e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

bool is_constant_name(std::string_view n) { return n == "pi" || n == "e"; }

}  // namespace

void PDESystem::validate() const {
  space.validate();
  std::set<std::string> solved;
  std::set<std::string> known(parameters.begin(), parameters.end());
  for (const auto& c : space.coordinates()) known.insert(c);
  for (const auto& eq : equations) {
    const Expression& l = eq.lhs;
    if (!space.is_derivative(l) || count_t(l.index()) != static_cast<int>(l.index().size())) {
      throw InvalidArgument("lhs must be a pure t-derivative of a dependent variable: " + to_string(l));
    }
    if (!solved.insert(l.name()).second) throw InvalidArgument("two equations solved for " + l.name());
  }
  for (const auto& eq : equations) {
    for (const auto& a : free_atoms(eq.rhs)) {
      if (a.is(Kind::Symbol)) {
        if (!known.count(a.name()) && !is_constant_name(a.name())) {
          throw InvalidArgument("undeclared symbol '" + a.name() + "' in " + to_string(eq.rhs));
        }
        continue;
      }
      if (!space.is_derivative(a)) throw InvalidArgument("unexpected jet variable " + to_string(a));
      if (static_cast<int>(a.index().size()) > space.max_order) {
        throw OrderOverflow(to_string(a) + " exceeds the order of the jet space");
      }
      for (const auto& other : equations) {
        if (other.lhs.name() == a.name() && count_t(a.index()) >= static_cast<int>(other.lhs.index().size())) {
          throw InvalidArgument("rhs contains the solved derivative " + to_string(a));
        }
      }
    }
  }
}

PDESystem PDESystem::with_max_order(int order) const {
  PDESystem s = *this;
  s.space.max_order = order;
  return s;
}

PDESystem make_system(std::vector<Equation> equations, std::vector<std::string> parameters,
                      std::vector<std::string> independent) {
  PDESystem sys;
  sys.space.independent = std::move(independent);
  sys.space.dependent.clear();
  int order = 2;
  for (const auto& eq : equations) {
    if (!eq.lhs.is(Kind::Jet)) throw InvalidArgument("lhs must be a derivative: " + to_string(eq.lhs));
    sys.space.dependent.push_back(eq.lhs.name());
  }
  for (const auto& eq : equations) {
    for (const auto& a : free_atoms(eq.lhs - eq.rhs)) {
      if (a.is(Kind::Jet)) order = std::max(order, static_cast<int>(a.index().size()));
    }
  }
  sys.space.max_order = order;
  sys.equations = std::move(equations);
  sys.parameters = std::move(parameters);
  sys.validate();
  return sys;
}

PDESystem parse_system(std::string_view text) {
  std::vector<Equation> eqs;
  std::vector<std::string> params;
  std::istringstream in{std::string(text)};
  std::string line;
  while (std::getline(in, line)) {
    if (auto h = line.find('#'); h != std::string::npos) line.erase(h);
    std::string s = trim(line);
    if (s.empty()) continue;
    if (s.rfind("param", 0) == 0 && (s.size() == 5 || std::isspace(static_cast<unsigned char>(s[5])))) {
      std::string body = s.substr(5);
      if (!body.empty() && body.back() == ';') body.pop_back();
      std::istringstream names(body);
      std::string n;
      while (std::getline(names, n, ',')) {
        n = trim(n);
        if (n.empty()) throw InvalidArgument("empty parameter name in: " + s);
        params.push_back(n);
      }
      continue;
    }
    if (!s.empty() && s.back() == ';') s.pop_back();
    auto eqpos = s.find('=');
    if (eqpos == std::string::npos || s.find('=', eqpos + 1) != std::string::npos) {
      throw InvalidArgument("expected 'lhs = rhs': " + s);
    }
    Expression lhs = parse(s.substr(0, eqpos));
    Expression rhs = parse(s.substr(eqpos + 1));
    eqs.push_back({lhs, rhs});
  }
  if (eqs.empty()) throw InvalidArgument("no equations given");
  return make_system(std::move(eqs), std::move(params));
}

std::string to_string(const PDESystem& sys) {
  std::string out;
  if (!sys.parameters.empty()) {
    out += "param ";
    for (std::size_t i = 0; i < sys.parameters.size(); ++i) out += (i ? ", " : "") + sys.parameters[i];
    out += ";\n";
  }
  for (const auto& eq : sys.equations) out += to_string(eq.lhs) + " = " + to_string(eq.rhs) + "\n";
  return out;
}

Expression on_manifold(const Expression& e, const PDESystem& sys) {
  Expression cur = e;
  for (int round = 0; round < 64; ++round) {
    ExpressionMap<Expression> repl;
    for (const auto& a : free_atoms(cur)) {
      if (!sys.space.is_derivative(a)) continue;
      for (const auto& eq : sys.equations) {
        int k = static_cast<int>(eq.lhs.index().size());
        if (eq.lhs.name() != a.name() || count_t(a.index()) < k) continue;
        std::vector<std::string> rest = a.index();
        for (int i = 0; i < k; ++i) rest.erase(std::find(rest.begin(), rest.end(), "t"));
        repl.emplace(a, total_derivative(eq.rhs, rest, sys.space));
      }
    }
    if (repl.empty()) return cur;
    cur = expand(substitute(cur, repl));
  }
  throw OrderOverflow("manifold substitution did not terminate");
}

std::vector<Expression> symmetry_residual(const VectorField& X, const PDESystem& sys) {
  if (X.space().independent != sys.space.independent || X.space().dependent != sys.space.dependent) {
    throw InvalidArgument("vector field and system live on different jet spaces");
  }
  PDESystem work = sys.with_max_order(sys.space.max_order + 2);
  std::vector<Expression> out;
  for (const auto& eq : sys.equations) {
    Expression delta = eq.delta();
    ProlongedField pr = prolong(X, std::max(1, jet_order(delta, sys.space)));
    out.push_back(expand(on_manifold(expand(pr.apply(delta)), work)));
  }
  return out;
}

bool is_symmetry(const VectorField& X, const PDESystem& sys) {
  for (const auto& r : symmetry_residual(X, sys)) {
    if (!r.is_zero()) return false;
  }
  return true;
}

std::map<std::string, std::string> infinitesimal_names(const JetSpace& space) {
  std::map<std::string, std::string> names;
  for (const auto& v : space.independent) {
    names[v] = v == "x" ? "xi" : v == "t" ? "tau" : "xi" + v;
  }
  if (space.dependent.size() == 1) {
    names[space.dependent[0]] = "phi";
  } else {
    for (std::size_t i = 0; i < space.dependent.size(); ++i) names[space.dependent[i]] = "phi" + std::to_string(i + 1);
  }
  return names;
}

VectorField DeterminingSet::generator(const JetSpace& space) const {
  std::map<std::string, Expression> coeffs;
  for (const auto& [unknown, coord] : coordinate_of) coeffs[coord] = sym(unknown);
  return VectorField(space, std::move(coeffs), unknowns);
}

Expression normalize_constraint(const Expression& c) {
  Expression e = expand(c);
  if (e.is_zero()) return e;
  const Expression& lead = e.is(Kind::Sum) ? e.operands()[0] : e;
  Rational k = split_coefficient(lead).first;
  return expand(e * num(1 / k));
}

DeterminingSet generate_determining(const PDESystem& sys) {
  DeterminingSet set;
  std::vector<std::string> args = sys.space.coordinates();
  for (const auto& [coord, name] : infinitesimal_names(sys.space)) {
    set.unknowns[name] = args;
    set.coordinate_of[name] = coord;
  }
  VectorField X = set.generator(sys.space);
  ExpressionSet seen;
  for (const auto& r : symmetry_residual(X, sys)) {
    std::vector<std::string> jets;
    for (const auto& a : free_atoms(r)) {
      if (sys.space.is_derivative(a)) jets.push_back(a.key());
    }
    for (const auto& [mono, coeff] : expand_collect(r, jets)) {
      Expression c = normalize_constraint(coeff);
      if (!c.is_zero() && seen.insert(c).second) set.constraints.push_back(c);
    }
  }
  return set;
}

std::vector<Expression> substitute_unknowns(const DeterminingSet& set,
                                            const std::map<std::string, Expression>& closed_forms) {
  std::vector<Expression> out;
  for (const auto& c : set.constraints) {
    ExpressionMap<Expression> repl;
    for (const auto& a : free_atoms(c)) {
      auto it = closed_forms.find(a.name());
      if (it == closed_forms.end() || !set.unknowns.count(a.name())) continue;
      Expression v = it->second;
      if (a.is(Kind::Jet)) {
        for (const auto& var : a.index()) v = differentiate(v, var);
      }
      repl.emplace(a, v);
    }
    out.push_back(expand(substitute(c, repl)));
  }
  return out;
}

NumericVerification verify_residuals_numeric(const std::vector<Expression>& residuals, int trials,
                                             std::uint64_t seed) {
  if (trials < 1) throw InvalidArgument("trials must be at least 1");
  std::vector<std::string> vars;
  for (const auto& r : residuals) {
    for (const auto& a : free_atoms(r)) {
      if (is_constant_name(a.key())) continue;
      if (std::find(vars.begin(), vars.end(), a.key()) == vars.end()) vars.push_back(a.key());
    }
  }
  std::vector<std::vector<CompiledExpression>> programs;
  for (const auto& r : residuals) {
    std::vector<CompiledExpression> terms;
    if (r.is(Kind::Sum)) {
      for (const auto& t : r.operands()) terms.emplace_back(t, vars);
    } else if (!r.is_zero()) {
      terms.emplace_back(r, vars);
    }
    programs.push_back(std::move(terms));
  }

  NumericVerification report;
  report.trials = trials;
  std::vector<double> point(vars.size());
  for (int trial = 0; trial < trials; ++trial) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(trial)};
    std::mt19937_64 rng(seq);
    std::uniform_real_distribution<double> mag(0.1, 2.0), small(0.01, 1.0);
    std::bernoulli_distribution sign(0.5);
    for (int attempt = 0;; ++attempt) {
      for (std::size_t i = 0; i < vars.size(); ++i) {
        point[i] = vars[i] == kEpsilon ? small(rng) : (sign(rng) ? -1.0 : 1.0) * mag(rng);
      }
      try {
        double worst = 0.0, worst_mag = 0.0;
        bool ok = true;
        for (const auto& terms : programs) {
          double sum = 0.0, scale = 0.0;
          for (const auto& p : terms) {
            double v = p(point);
            sum += v;
            scale += std::fabs(v);
          }
          worst = std::max(worst, std::fabs(sum));
          worst_mag = std::max(worst_mag, scale);
          if (!(std::fabs(sum) < 1e-9 * (1.0 + scale))) ok = false;
        }
        report.max_abs_residual = std::max(report.max_abs_residual, worst);
        report.max_magnitude = std::max(report.max_magnitude, worst_mag);
        report.pass = report.pass && ok;
        break;
      } catch (const DomainError&) {
        if (attempt >= 10) throw;
        ++report.resamples;
      }
    }
  }
  return report;
}

NumericVerification verify_generator_numeric(const VectorField& X, const PDESystem& sys, int trials,
                                             std::uint64_t seed) {
  return verify_residuals_numeric(symmetry_residual(X, sys), trials, seed);
}

}  // namespace kppsym
