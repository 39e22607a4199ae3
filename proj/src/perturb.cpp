#include "kppsym/perturb.hpp"

#include "kppsym/errors.hpp"

namespace kppsym {

namespace {

Expression eps() { return sym(std::string(kEpsilon)); }

Expression at(const Expression& r, const Expression& value) { return expand(substitute(r, Binding{{"u", value}})); }

}  // namespace

void PerturbedEquation::validate() const {
  if (contains(reaction, eps())) throw InvalidArgument("the reaction term may not contain eps");
  for (const auto& a : free_atoms(reaction)) {
    if (a.is(Kind::Jet)) throw InvalidArgument("the reaction term may not contain derivatives");
  }
  expand_collect(reaction, {"u"});
}

PDESystem PerturbedEquation::system() const {
  validate();
  std::vector<std::string> params{std::string(kEpsilon)};
  params.insert(params.end(), parameters.begin(), parameters.end());
  return make_system({{jet("u", {"t"}), eps() * jet("u", {"x", "x"}) + reaction}}, params);
}

PerturbedEquation builtin_equation(std::string_view name) {
  if (name == "heat") return {"heat", 0, {}};
  if (name == "fisher") return {"fisher", parse("a*u*(1-u)"), {"a"}};
  if (name == "zeldovich") return {"zeldovich", parse("u^2*(1-u)"), {}};
  if (name == "nws") return {"nws", parse("u*(1-u^2)"), {}};
  throw InvalidArgument("unknown built-in equation '" + std::string(name) + "'");
}

std::vector<std::string> builtin_equation_names() { return {"heat", "fisher", "zeldovich", "nws"}; }

PDESystem split_order1(const PerturbedEquation& p, int order) {
  if (order != 1) throw InvalidArgument("only first-order splitting is implemented");
  p.validate();
  Expression v = sym("v"), w = sym("w");
  Expression rhs = eps() * (jet("v", {"x", "x"}) + eps() * jet("w", {"x", "x"})) + at(p.reaction, v + eps() * w);
  auto parts = expand_collect(rhs, {std::string(kEpsilon)});
  Expression r0 = parts.count({0}) ? parts.at({0}) : Expression{};
  Expression r1 = parts.count({1}) ? parts.at({1}) : Expression{};
  std::vector<std::string> params{std::string(kEpsilon)};
  params.insert(params.end(), p.parameters.begin(), p.parameters.end());
  return make_system({{jet("v", {"t"}), r0}, {jet("w", {"t"}), r1}}, params);
}

Expression split_remainder(const PerturbedEquation& p) {
  PDESystem s = split_order1(p);
  Expression v = sym("v"), w = sym("w");
  Expression full = jet("v", {"t"}) + eps() * jet("w", {"t"}) -
                    eps() * (jet("v", {"x", "x"}) + eps() * jet("w", {"x", "x"})) - at(p.reaction, v + eps() * w);
  return expand(full - s.equations[0].delta() - eps() * s.equations[1].delta());
}

PrintedSplit printed_split(std::string_view name) {
  PrintedSplit out;
  if (name == "fisher") {
    out.deltas = {parse("v_t - a*v*(1-v)*w"), parse("w_t - v_xx - a*w*(1-2*v)")};
    out.typo = {true, false};
    out.notes = {
        "order 0 printed as v_t - a*v*(1-v)*w = 0; the trailing w cannot arise at order eps^0 and the "
        "reduced equation f' - a*f*(1-f) = 0 used later agrees with v_t = a*v*(1-v)"};
    return out;
  }
  if (name == "zeldovich") {
    out.deltas = {parse("v_t - v^2*(1-v)"), parse("w_t - v_xx - 2*v*w*(1-v) + v^2*w")};
    out.typo = {false, false};
    return out;
  }
  throw InvalidArgument("no printed split for '" + std::string(name) + "'");
}

PDESystem builtin_system(std::string_view name) {
  static constexpr std::string_view suffix = "-split";
  if (name.size() > suffix.size() && name.substr(name.size() - suffix.size()) == suffix) {
    auto base = name.substr(0, name.size() - suffix.size());
    if (base == "heat") throw InvalidArgument("the heat equation has no nontrivial split");
    return split_order1(builtin_equation(base));
  }
  return builtin_equation(name).system();
}

std::vector<std::string> builtin_system_names() {
  return {"heat", "fisher", "zeldovich", "nws", "fisher-split", "zeldovich-split", "nws-split"};
}

}  // namespace kppsym
