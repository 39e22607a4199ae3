#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "kppsym/detsys.hpp"
#include "kppsym/errors.hpp"
#include "kppsym/liealg.hpp"
#include "kppsym/perturb.hpp"
#include "kppsym/solutions.hpp"

using json = nlohmann::ordered_json;
using namespace kppsym;

namespace {

struct Options {
  std::string output = "text";
  std::uint64_t seed = 0;
};

// Exit status carried out of a subcommand.
struct Outcome {
  int code = 0;
  json doc;
  std::string text;
};

PDESystem load_system(const std::string& spec) {
  const std::string prefix = "builtin:";
  if (spec.rfind(prefix, 0) == 0) return builtin_system(spec.substr(prefix.size()));
  std::ifstream in(spec);
  if (!in) {
    for (const auto& n : builtin_system_names()) {
      if (n == spec) return builtin_system(spec);
    }
    throw InvalidArgument("cannot open equation file '" + spec + "'");
  }
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_system(ss.str());
}

std::vector<double> parse_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    double v = std::stod(item, &used);
    if (used != item.size()) throw InvalidArgument("bad number '" + item + "'");
    out.push_back(v);
  }
  return out;
}

Grid parse_grid(const std::string& text, Grid g) {
  if (text.empty()) return g;
  auto v = parse_list(text);
  if (v.size() != 6) throw InvalidArgument("--grid expects xlo,xhi,tlo,thi,nx,nt");
  g.x_lo = v[0];
  g.x_hi = v[1];
  g.t_lo = v[2];
  g.t_hi = v[3];
  g.nx = static_cast<int>(v[4]);
  g.nt = static_cast<int>(v[5]);
  g.validate();
  return g;
}

json grid_json(const Grid& g) {
  json labels = json::array();
  for (const auto& e : g.exclusions) labels.push_back(e.label);
  return {{"x_range", {g.x_lo, g.x_hi}}, {"t_range", {g.t_lo, g.t_hi}}, {"nx", g.nx}, {"nt", g.nt},
          {"excluded", labels}};
}

std::string sci(double v) {
  std::ostringstream os;
  os << std::scientific << std::setprecision(3) << v;
  return os.str();
}

json system_json(const PDESystem& sys) {
  json eqs = json::array();
  for (const auto& eq : sys.equations) eqs.push_back(to_string(eq.lhs) + " = " + to_string(eq.rhs));
  return {{"independent", sys.space.independent}, {"dependent", sys.space.dependent},
          {"parameters", sys.parameters}, {"equations", eqs}};
}

Outcome run_verify(const std::string& equation, const std::string& generator, int trials, const Options& opt) {
  PDESystem sys = load_system(equation);
  VectorField X = parse_vector_field(generator, sys.space);
  auto residuals = symmetry_residual(X, sys);
  bool symbolic = std::all_of(residuals.begin(), residuals.end(), [](const Expression& r) { return r.is_zero(); });
  auto numeric = verify_residuals_numeric(residuals, trials, opt.seed);
  bool pass = symbolic && numeric.pass;

  Outcome out;
  json rs = json::array();
  for (const auto& r : residuals) rs.push_back(to_string(r));
  out.doc = {{"command", "verify"},
             {"system", system_json(sys)},
             {"generator", to_string(X)},
             {"residuals", rs},
             {"symbolic_zero", symbolic},
             {"numeric", {{"trials", numeric.trials}, {"seed", opt.seed}, {"max_abs_residual", numeric.max_abs_residual},
                          {"max_magnitude", numeric.max_magnitude}, {"resamples", numeric.resamples},
                          {"pass", numeric.pass}}},
             {"verdict", pass ? "pass" : "fail"}};
  std::ostringstream os;
  os << "generator: " << to_string(X) << "\n";
  for (std::size_t k = 0; k < residuals.size(); ++k) {
    os << "residual[" << to_string(sys.equations[k].lhs) << "]: " << to_string(residuals[k]) << "\n";
  }
  os << "symbolic: " << (symbolic ? "zero" : "nonzero") << "\n";
  os << "numeric: max |residual| = " << sci(numeric.max_abs_residual) << " over " << numeric.trials << " points ("
     << (numeric.pass ? "pass" : "fail") << ")\n";
  os << "verdict: " << (pass ? "pass" : "fail") << "\n";
  out.text = os.str();
  out.code = pass ? 0 : 1;
  return out;
}

Outcome run_determining(const std::string& equation) {
  PDESystem sys = load_system(equation);
  DeterminingSet set = generate_determining(sys);
  Outcome out;
  json unknowns = json::object();
  for (const auto& [name, args] : set.unknowns) unknowns[name] = {{"coordinate", set.coordinate_of.at(name)}, {"arguments", args}};
  json cs = json::array();
  for (const auto& c : set.constraints) cs.push_back(to_string(c));
  out.doc = {{"command", "determining"}, {"system", system_json(sys)}, {"unknowns", unknowns}, {"constraints", cs}};
  std::ostringstream os;
  os << "generator: " << to_string(set.generator(sys.space)) << "\n";
  os << set.constraints.size() << " determining equations:\n";
  for (const auto& c : set.constraints) os << "  " << to_string(c) << " = 0\n";
  out.text = os.str();
  return out;
}

Outcome run_split(const std::string& name) {
  PerturbedEquation p = builtin_equation(name);
  PDESystem sys = split_order1(p);
  Outcome out;
  json notes = json::array();
  json printed = nullptr;
  std::ostringstream os;
  os << "u_t = eps*u_xx + " << to_string(p.reaction) << ", u = v + eps*w\n";
  const char* labels[] = {"O(eps^0)", "O(eps^1)"};
  for (std::size_t k = 0; k < sys.equations.size(); ++k) {
    os << labels[k] << ": " << to_string(sys.equations[k].lhs) << " = " << to_string(sys.equations[k].rhs) << "\n";
  }
  if (name == "fisher" || name == "zeldovich") {
    PrintedSplit ps = printed_split(name);
    printed = json::array();
    for (std::size_t k = 0; k < ps.deltas.size(); ++k) {
      bool agrees = expand(ps.deltas[k] - sys.equations[k].delta()).is_zero();
      printed.push_back({{"printed", to_string(ps.deltas[k]) + " = 0"}, {"agrees", agrees}, {"typo", ps.typo[k]}});
      os << "printed " << labels[k] << ": " << to_string(ps.deltas[k]) << " = 0 ("
         << (agrees ? "agrees" : "differs; typo repaired") << ")\n";
    }
    for (const auto& n : ps.notes) {
      notes.push_back(n);
      os << "note: " << n << "\n";
    }
  }
  out.doc = {{"command", "split"}, {"equation", name}, {"reaction", to_string(p.reaction)}, {"system", system_json(sys)},
             {"printed", printed}, {"notes", notes}};
  out.text = os.str();
  return out;
}

std::string table(const std::vector<std::vector<std::string>>& cells, const std::string& corner) {
  std::size_t w = corner.size();
  for (const auto& r : cells) {
    for (const auto& c : r) w = std::max(w, c.size());
  }
  auto pad = [&](const std::string& s) { return s + std::string(w - s.size() + 2, ' '); };
  std::string out = pad(corner);
  for (std::size_t j = 0; j < cells.size(); ++j) out += pad("X" + std::to_string(j + 1));
  out += "\n" + std::string((w + 2) * (cells.size() + 1), '-') + "\n";
  for (std::size_t i = 0; i < cells.size(); ++i) {
    out += pad("X" + std::to_string(i + 1));
    for (const auto& c : cells[i]) out += pad(c);
    out += "\n";
  }
  return out;
}

Outcome run_algebra(const std::string& name) {
  if (name != "kpp3") throw InvalidArgument("unknown built-in algebra '" + name + "'");
  LieAlgebra alg = kpp3();
  const std::size_t n = alg.dim();
  Expression s = sym("s");
  std::vector<std::vector<std::string>> comm(n), ad(n);
  json jb = json::array(), jc = json::array(), ja = json::array(), jm = json::array();
  for (const auto& X : alg.basis) jb.push_back(to_string(X));
  for (std::size_t i = 0; i < n; ++i) {
    json rc = json::array(), ra = json::array();
    for (std::size_t j = 0; j < n; ++j) {
      comm[i].push_back(to_string(alg.bracket(i, j)));
      AlgebraElement e(n, Expression{});
      e[j] = 1;
      ad[i].push_back(to_string(adjoint(alg, i, s, e)));
      rc.push_back(comm[i].back());
      ra.push_back(ad[i].back());
    }
    jc.push_back(rc);
    ja.push_back(ra);
  }
  std::ostringstream os;
  os << "basis:\n";
  for (std::size_t i = 0; i < n; ++i) os << "  X" << i + 1 << " = " << to_string(alg.basis[i]) << "\n";
  os << "\ncommutators [Xi, Xj]:\n" << table(comm, "[Xi,Xj]");
  os << "\nadjoint Ad(exp(s Xi)) Xj:\n" << table(ad, "Ad");
  for (std::size_t i = 0; i < n; ++i) {
    Expression si = sym("s" + std::to_string(i));
    Matrix M = adjoint_matrix(alg, i, si);
    json rows = json::array();
    for (const auto& r : M) {
      json row = json::array();
      for (const auto& e : r) row.push_back(to_string(e));
      rows.push_back(row);
    }
    jm.push_back({{"generator", "X" + std::to_string(i + 1)}, {"parameter", to_string(si)}, {"rows", rows}});
    os << "\nM" << i + 1 << " (parameter " << to_string(si) << "):\n" << format_matrix(M);
  }
  AlgebraElement a{sym("a1"), sym("a2"), sym("a3")};
  AlgebraElement composed = apply_columns(adjoint_matrix(alg, 2, sym("s2")),
                                          apply_columns(adjoint_matrix(alg, 1, sym("s1")),
                                                        apply_columns(adjoint_matrix(alg, 0, sym("s0")), a)));
  json jcomp = json::array();
  for (const auto& e : composed) jcomp.push_back(to_string(e));
  os << "\nM3 M2 M1 (a1, a2, a3): (" << to_string(composed[0]) << ", " << to_string(composed[1]) << ", "
     << to_string(composed[2]) << ")\n";
  Outcome out;
  out.doc = {{"command", "algebra"}, {"algebra", name}, {"basis", jb}, {"commutators", jc}, {"adjoint", ja},
             {"matrices", jm}, {"composed", jcomp}};
  out.text = os.str();
  return out;
}

Outcome run_canonicalize(const std::string& coeffs, const std::string& convention) {
  std::vector<Rational> a;
  std::stringstream ss(coeffs);
  std::string item;
  while (std::getline(ss, item, ',')) a.push_back(parse_rational(item));
  bool paper = convention == "paper";
  if (!paper && convention != "adjoint") throw InvalidArgument("--convention must be paper or adjoint");
  CanonicalForm f = paper ? canonicalize(a) : canonicalize_orbit(a);
  auto replayed = replay(kpp3(), a, f.witness, paper);

  AlgebraElement canon;
  for (const auto& q : f.canonical) canon.push_back(num(q));
  std::string form = to_string(canon);
  json steps = json::array();
  std::ostringstream os;
  os << "case " << to_string(f.which) << ": " << form << "\n";
  if (f.which == OptimalCase::II) os << "alpha = " << f.parameter << "\n";
  if (f.which == OptimalCase::III) os << "beta = " << f.parameter << "\n";
  os << "witness:";
  for (const auto& st : f.witness.steps) {
    steps.push_back({{"generator", "X" + std::to_string(st.index + 1)}, {"s", st.s.get_str()}});
    os << " Ad(exp(" << st.s << "*X" << st.index + 1 << ")),";
  }
  os << " scale " << f.witness.scale << "\n";
  bool ok = replayed == f.canonical;
  os << "replay: " << (ok ? "matches" : "MISMATCH") << "\n";
  Outcome out;
  json jin = json::array(), jcanon = json::array();
  for (const auto& q : a) jin.push_back(q.get_str());
  for (const auto& q : f.canonical) jcanon.push_back(q.get_str());
  out.doc = {{"command", "canonicalize"},
             {"convention", convention},
             {"input", jin},
             {"case", to_string(f.which)},
             {"canonical", jcanon},
             {"form", form},
             {"parameter", f.which == OptimalCase::I ? json(nullptr) : json(f.parameter.get_str())},
             {"witness", {{"steps", steps}, {"scale", f.witness.scale.get_str()}}},
             {"replay_matches", ok}};
  out.text = os.str();
  out.code = ok ? 0 : 1;
  return out;
}

json residual_json(const ResidualReport& r, const SolutionEntry& e, const Grid& g) {
  return {{"entry_id", r.entry_id},      {"equation", e.equation}, {"epsilon", r.epsilon},
          {"grid", grid_json(g)},        {"sup_norm", r.sup_norm}, {"l2_norm", r.l2_norm},
          {"per_equation_sup", r.sup},   {"n_points", r.n_points}, {"skipped", r.skipped},
          {"verdict", r.pass ? "pass" : "fail"}, {"provenance", to_string(e.provenance)}};
}

std::string residual_text(const ResidualReport& r, const SolutionEntry& e) {
  std::ostringstream os;
  os << std::left << std::setw(28) << "entry" << r.entry_id << "\n"
     << std::setw(28) << "equation" << e.equation << (e.is_split() ? " (split)" : "") << "\n"
     << std::setw(28) << "provenance" << to_string(e.provenance) << "\n"
     << std::setw(28) << "eps" << r.epsilon << "\n";
  for (std::size_t k = 0; k < r.equations.size(); ++k) {
    os << std::setw(28) << ("sup[" + r.equations[k].substr(0, r.equations[k].find(' ')) + "]") << sci(r.sup[k]) << "\n";
  }
  os << std::setw(28) << "sup_norm" << sci(r.sup_norm) << "\n"
     << std::setw(28) << "l2_norm" << sci(r.l2_norm) << "\n"
     << std::setw(28) << "points" << r.n_points << " (" << r.skipped << " skipped)\n"
     << std::setw(28) << "verdict" << (r.pass ? "pass" : "fail") << "\n";
  return os.str();
}

Outcome run_residual(const std::string& id, double eps, const std::string& grid_text) {
  const SolutionEntry& e = find_entry(id);
  Grid g = parse_grid(grid_text, e.grid);
  auto r = residual(e, g, eps);
  Outcome out;
  out.doc = residual_json(r, e, g);
  out.doc["command"] = "residual";
  out.doc["notes"] = e.notes;
  out.text = residual_text(r, e) + "notes: " + e.notes + "\n";
  out.code = r.pass ? 0 : 1;
  return out;
}

Outcome run_order_scaling(const std::string& id, const std::string& eps_text, const std::string& grid_text) {
  const SolutionEntry& e = find_entry(id);
  Grid g = parse_grid(grid_text, e.grid);
  auto sc = order_scaling(e, g, parse_list(eps_text));
  Outcome out;
  out.doc = {{"command", "order-scaling"}, {"entry_id", e.id}, {"grid", grid_json(g)}, {"eps", sc.eps},
             {"sup_norms", sc.sup_norms}, {"slopes", sc.slopes},
             {"fitted_exponent", sc.exact ? json("exact") : json(sc.fitted_exponent)}};
  std::ostringstream os;
  os << "entry " << e.id << ": defect of u_t - eps*u_xx - R(u) at u = v + eps*w\n";
  for (std::size_t i = 0; i < sc.eps.size(); ++i) os << "  eps = " << sc.eps[i] << "  sup = " << sci(sc.sup_norms[i]) << "\n";
  if (sc.exact) {
    os << "fitted exponent: exact\n";
  } else {
    os << "fitted exponent: " << std::fixed << std::setprecision(4) << sc.fitted_exponent << "\n";
  }
  out.text = os.str();
  return out;
}

Outcome run_transform(const std::string& id, int flow_index, double s, double eps) {
  const SolutionEntry& e = find_entry(id);
  SolutionEntry t = transform_solution(e, flow_index, s);
  auto r = residual(t, eps);
  Outcome out;
  out.doc = {{"command", "transform"}, {"source", e.id}, {"flow", flow_index}, {"s", s}, {"entry_id", t.id},
             {"order0", to_string(t.bound_order0())}, {"order1", to_string(*t.bound_order1())},
             {"residual", residual_json(r, t, t.grid)}};
  out.text = "v = " + to_string(t.bound_order0()) + "\nw = " + to_string(*t.bound_order1()) + "\n" + residual_text(r, t);
  out.code = r.pass ? 0 : 1;
  return out;
}

Outcome run_catalog() {
  Outcome out;
  json entries = json::array();
  std::ostringstream os;
  for (const auto& e : catalog()) {
    json j = {{"id", e.id}, {"equation", e.equation}, {"order0", to_string(e.order0)},
              {"order1", e.order1 ? json(to_string(*e.order1)) : json(nullptr)},
              {"provenance", to_string(e.provenance)}, {"notes", e.notes}};
    entries.push_back(j);
    os << std::left << std::setw(24) << e.id << std::setw(11) << e.equation << to_string(e.provenance) << "\n";
  }
  out.doc = {{"command", "catalog"}, {"entries", entries}};
  out.text = os.str();
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Approximate-symmetry toolkit for perturbed reaction-diffusion equations"};
  app.require_subcommand(1);
  app.fallthrough();
  Options opt;
  app.add_option("--output", opt.output, "text or json")->check(CLI::IsMember({"text", "json"}));
  app.add_option("--seed", opt.seed, "seed for randomized checks");

  std::string equation, generator, builtin, coeffs, entry, grid, eps_list, convention = "paper";
  int trials = 100, flow_index = 1;
  double eps = 0.0, s = 0.0;

  auto* verify = app.add_subcommand("verify", "symbolic and numeric symmetry check");
  verify->add_option("--equation", equation, "equation file or builtin:<name>")->required();
  verify->add_option("--generator", generator, "vector field, e.g. \"x*dx + 2*t*dt\"")->required();
  verify->add_option("--trials", trials)->check(CLI::PositiveNumber);

  auto* determining = app.add_subcommand("determining", "list the determining equations");
  determining->add_option("--equation", equation)->required();

  auto* split = app.add_subcommand("split", "order-0 / order-1 system of u = v + eps*w");
  split->add_option("--builtin", builtin)->required()->check(CLI::IsMember({"fisher", "zeldovich", "nws", "heat"}));

  auto* algebra = app.add_subcommand("algebra", "commutator and adjoint tables");
  algebra->add_option("--builtin", builtin)->required();

  auto* canon = app.add_subcommand("canonicalize", "optimal-system representative");
  canon->add_option("--coeffs", coeffs, "a1,a2,a3")->required();
  canon->add_option("--convention", convention, "paper (column action) or adjoint (row action)");

  auto* res = app.add_subcommand("residual", "PDE residual of a catalog entry on a grid");
  res->add_option("--entry", entry)->required();
  res->add_option("--eps", eps);
  res->add_option("--grid", grid, "xlo,xhi,tlo,thi,nx,nt");

  auto* scaling = app.add_subcommand("order-scaling", "eps^k defect of u = v + eps*w");
  scaling->add_option("--entry", entry)->required();
  scaling->add_option("--eps-list", eps_list)->required();
  scaling->add_option("--grid", grid);

  auto* transform = app.add_subcommand("transform", "apply G1, G2 or G3 to a split entry");
  transform->add_option("--entry", entry)->required();
  transform->add_option("--flow", flow_index)->required()->check(CLI::Range(1, 3));
  transform->add_option("--s", s)->required();
  transform->add_option("--eps", eps);

  auto* list = app.add_subcommand("catalog", "list solution entries");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  Outcome out;
  try {
    auto entry_eps = [&] { return eps > 0.0 ? eps : find_entry(entry).default_epsilon; };
    if (*verify) out = run_verify(equation, generator, trials, opt);
    else if (*determining) out = run_determining(equation);
    else if (*split) out = run_split(builtin);
    else if (*algebra) out = run_algebra(builtin);
    else if (*canon) out = run_canonicalize(coeffs, convention);
    else if (*res) out = run_residual(entry, entry_eps(), grid);
    else if (*scaling) out = run_order_scaling(entry, eps_list, grid);
    else if (*transform) out = run_transform(entry, flow_index, s, entry_eps());
    else if (*list) out = run_catalog();
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const InvalidArgument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const ZeroElement& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: bad number: " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  if (opt.output == "json") {
    std::cout << out.doc.dump(2) << "\n";
  } else {
    std::cout << out.text;
  }
  return out.code;
}
