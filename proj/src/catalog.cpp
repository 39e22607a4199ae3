#include "kppsym/solutions.hpp"

namespace kppsym {

namespace {

Binding constants(std::initializer_list<std::pair<const char*, const char*>> values) {
  Binding b;
  for (const auto& [k, v] : values) b[k] = parse(v);
  return b;
}

Grid grid(double x_lo, double x_hi, double t_lo = 0.1, double t_hi = 2.0) {
  Grid g;
  g.x_lo = x_lo;
  g.x_hi = x_hi;
  g.t_lo = t_lo;
  g.t_hi = t_hi;
  return g;
}

std::vector<SolutionEntry> build() {
  std::vector<SolutionEntry> out;

  SolutionEntry e;
  e.id = "fick_wave";
  e.equation = "heat";
  e.order0 = parse("c1 + c2*exp(-c*(x - c*t)/eps)");
  e.params = constants({{"c", "1"}, {"c1", "0"}, {"c2", "1"}});
  e.uses_epsilon = true;
  e.grid = grid(-2, 2);
  e.notes = "travelling wave invariant under c*dx + dt";
  out.push_back(e);

  e = {};
  e.id = "fick_erf";
  e.equation = "heat";
  e.order0 = parse("c1 + c2*erf(abs(x)/(2*sqrt(eps*t)))");
  e.params = constants({{"c1", "0"}, {"c2", "1"}});
  e.uses_epsilon = true;
  e.grid = grid(0.2, 3);
  e.notes = "similarity solution in x^2/t; abs(x) is smooth only away from x = 0, so the grid stays on x > 0";
  out.push_back(e);

  e = {};
  e.id = "fisher_x3";
  e.equation = "fisher";
  e.order0 = parse("1/(1 + c1*exp(-a*t))");
  e.order1 = parse("c2*exp(-a*t)/(x^2*(1 + c1*exp(-a*t))^2)");
  e.params = constants({{"a", "1"}, {"c1", "1"}, {"c2", "1"}});
  e.grid = grid(0.5, 3);
  e.notes = "invariant under x*dx - 2*w*dw";
  out.push_back(e);

  e = {};
  e.id = "fisher_wave";
  e.equation = "fisher";
  e.order0 = parse("1/(c1*exp(a*(x - c*t)/c) + 1)");
  e.order1 = parse(
      "exp(a*(x - c*t)/c)/(c1*exp(a*(x - c*t)/c) + 1)^2"
      " * (c1*a^2/c3*(x - c*t) - 2*a*c1/c2*ln(c1*exp(a*(x - c*t)/c) + 1) + c2)");
  e.params = constants({{"a", "1"}, {"c", "2"}, {"c1", "1"}, {"c2", "1"}, {"c3", "1"}});
  e.grid = grid(-2, 2);
  e.notes =
      "order-1 part as printed: g(y) mixes c2 and c3 and the assembled u uses c^3 and c^2 instead; "
      "shipped verbatim, no correction attempted; with c = 1 and c2 = c3 = 1 the order-1 residual happens to vanish";
  out.push_back(e);

  e = {};
  e.id = "az_wave";
  e.equation = "fisher";
  e.order0 = parse("(1 + C*exp(sqrt(a/(6*eps))*x - 5*a*t/6))^(-2)");
  e.params = constants({{"a", "1"}, {"C", "1"}});
  e.provenance = Provenance::CorrectedForm;
  e.uses_epsilon = true;
  e.grid = grid(-2, 2);
  e.notes =
      "u = (1 + C*exp(k*x - w*t))^-2 with k^2 = a/(6*eps), w = 5*a/6 from matching the e^1 and e^2 "
      "coefficients of the residual; the printed form puts eps in the amplitude and uses k = sqrt(6)";
  out.push_back(e);

  e = {};
  e.id = "az_wave/paper";
  e.equation = "fisher";
  e.order0 = parse("(1 + eps/sqrt(6)*exp(sqrt(6)*x - 5*t/6))^(-2)");
  e.params = constants({{"a", "1"}});
  e.uses_epsilon = true;
  e.grid = grid(-2, 2);
  e.notes = "printed form, read with a = 1";
  out.push_back(e);

  e = {};
  e.id = "zeldovich_x3/paper";
  e.equation = "zeldovich";
  e.order0 = parse("1/lambertW(-exp(-t-1)/c1)");
  e.order1 = parse(
      "c2*exp(-2*lambertW(-exp(-t-1)/c1))*lambertW(-exp(-t-1)/c1)/(x^2*(lambertW(-exp(-t-1)/c1) + 1))");
  e.params = constants({{"c1", "1"}, {"c2", "1"}});
  e.grid = grid(0.5, 3);
  e.notes = "printed form; v = 1/W(-e^(-t-1)/c1) does not satisfy v_t = v^2*(1-v)";
  out.push_back(e);

  e = {};
  e.id = "zeldovich_x3/corrected";
  e.equation = "zeldovich";
  e.order0 = parse("1/(1 + lambertW(exp(-t-1)/c1))");
  e.order1 = parse("c2*lambertW(exp(-t-1)/c1)/(x^2*(1 + lambertW(exp(-t-1)/c1))^3)");
  e.params = constants({{"c1", "1"}, {"c2", "1"}});
  e.provenance = Provenance::CorrectedForm;
  e.grid = grid(0.5, 3);
  e.notes =
      "W' = -W/(1+W) along t gives v_t = W/(1+W)^3 = v^2*(1-v); the order-1 reduction is "
      "g' = g*(2*f - 3*f^2), solved by g = c2*f^2*(1-f)";
  out.push_back(e);

  e = {};
  e.id = "nws_x3";
  e.equation = "nws";
  e.order0 = parse("1/sqrt(1 + c1*exp(-2*t))");
  e.order1 = parse("c2*exp(-2*t)/(1 + c1*exp(-2*t))^(3/2)");
  e.params = constants({{"c1", "1"}, {"c2", "1"}});
  e.grid = grid(0.5, 3);
  e.notes =
      "printed without the x^-2 factor of the invariant w = g(T)/x^2; the order-1 equation has no "
      "w_xx term, so both forms solve the split system";
  out.push_back(e);

  return out;
}

}  // namespace

const std::vector<SolutionEntry>& catalog() {
  static const std::vector<SolutionEntry> entries = build();
  return entries;
}

}  // namespace kppsym
