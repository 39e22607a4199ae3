#include <doctest.h>

#include "kppsym/detsys.hpp"
#include "kppsym/errors.hpp"
#include "kppsym/jet.hpp"
#include "support/oracles.hpp"

using namespace kppsym;

namespace {

JetSpace scalar_space(int order = 2) {
  JetSpace s;
  s.max_order = order;
  return s;
}

JetSpace pair_space(int order = 2) {
  JetSpace s;
  s.dependent = {"v", "w"};
  s.max_order = order;
  return s;
}

bool same(const Expression& a, const Expression& b) { return expand(a - b).is_zero(); }

const char* kHeatGenerators[] = {
    "dx",
    "dt",
    "x*dx + 2*t*dt",
    "-2*eps*t*dx + x*u*du",
    "u*du",
    "4*x*t*dx + 4*t^2*dt - (2*t + x^2/eps)*u*du",
};

}  // namespace

TEST_CASE("jet space bookkeeping") {
  JetSpace s = pair_space(3);
  CHECK(s.coordinates() == std::vector<std::string>{"x", "t", "v", "w"});
  CHECK(s.multi_indices(2).size() == 3);
  CHECK(s.multi_indices(3).size() == 4);
  CHECK(s.is_derivative(parse("v_xt")));
  CHECK_FALSE(s.is_derivative(parse("v")));
  CHECK_FALSE(s.is_derivative(parse("u_x")));
  JetSpace bad;
  bad.dependent = {"x"};
  CHECK_THROWS_AS(bad.validate(), InvalidArgument);
  JetSpace zero;
  zero.max_order = 0;
  CHECK_THROWS_AS(zero.validate(), InvalidArgument);
}

TEST_CASE("total derivative") {
  JetSpace s = scalar_space(3);
  CHECK(same(total_derivative(parse("x*u_x"), "x", s), parse("u_x + x*u_xx")));
  CHECK(same(total_derivative(parse("u^2"), "t", s), parse("2*u*u_t")));
  CHECK(same(total_derivative(parse("exp(x)*u"), std::vector<std::string>{"x", "x"}, s),
             parse("exp(x)*(u + 2*u_x + u_xx)")));
  CHECK_THROWS_AS(total_derivative(parse("u_xxx"), "x", s), OrderOverflow);

  FunctionDependencies deps{{"xi", {"x", "t", "u"}}};
  CHECK(same(total_derivative(sym("xi"), "x", s, deps), parse("Diff(xi, x, 1) + u_x*Diff(xi, u, 1)")));
}

TEST_CASE("total derivatives commute") {
  JetSpace s = scalar_space(4);
  oracle::ExpressionGenerator gen(21, {"x", "t", "u", "u_x", "u_t"});
  for (int i = 0; i < 300; ++i) {
    Expression f = substitute(gen.smooth(3), Binding{{"u_x", jet("u", {"x"})}, {"u_t", jet("u", {"t"})}});
    Expression a = total_derivative(total_derivative(f, "x", s), "t", s);
    Expression b = total_derivative(total_derivative(f, "t", s), "x", s);
    CHECK_MESSAGE(zero_test(a - b, static_cast<unsigned long long>(i)) != ZeroVerdict::NonZero, to_string(f));
  }
}

TEST_CASE("vector field parsing and printing") {
  JetSpace s = scalar_space();
  VectorField X = parse_vector_field("-2*eps*t*dx + x*u*du", s);
  CHECK(X.coefficient("x") == parse("-2*eps*t"));
  CHECK(X.coefficient("t").is_zero());
  CHECK(to_string(X) == "-2*eps*t*dx + u*x*du");
  CHECK(parse_vector_field(to_string(X), s) == X);
  CHECK(X.apply(parse("x^2*u")) == parse("-4*eps*t*x*u + x^3*u"));
  CHECK_THROWS_AS(parse_vector_field("u_x*dx", s), InvalidArgument);
  CHECK_THROWS_AS(parse_vector_field("x*du + dx^2", s), InvalidArgument);
  VectorField sum = parse_vector_field("dx", s) + parse_vector_field("x*dx", s);
  CHECK(sum == parse_vector_field("(1 + x)*dx", s));
  CHECK((num(0) * sum).is_zero());
}

TEST_CASE("first prolongation of the Galilean generator") {
  JetSpace s = scalar_space();
  VectorField X = parse_vector_field(kHeatGenerators[3], s);
  ProlongedField pr = prolong2(X);
  CHECK(same(pr.coefficient(parse("u_x")), parse("u + x*u_x")));
  CHECK(same(pr.coefficient(parse("u_t")), parse("2*eps*u_x + x*u_t")));
  CHECK(same(pr.coefficient(parse("u_xx")), parse("2*u_x + x*u_xx")));
  CHECK(same(characteristic(X, "u"), parse("x*u + 2*eps*t*u_x")));
}

TEST_CASE("scaling generator prolongs by weights") {
  JetSpace s = scalar_space();
  ProlongedField pr = prolong2(parse_vector_field(kHeatGenerators[2], s));
  CHECK(same(pr.coefficient(parse("u_x")), parse("-u_x")));
  CHECK(same(pr.coefficient(parse("u_t")), parse("-2*u_t")));
  CHECK(same(pr.coefficient(parse("u_xx")), parse("-2*u_xx")));
  CHECK(same(pr.coefficient(parse("u_xt")), parse("-3*u_xt")));
  CHECK(same(pr.apply(parse("u_t - eps*u_xx")), parse("-2*(u_t - eps*u_xx)")));
}

TEST_CASE("characteristic formula agrees with the recursive formula") {
  JetSpace s = scalar_space();
  std::vector<VectorField> fields;
  for (const char* g : kHeatGenerators) fields.push_back(parse_vector_field(g, s));
  fields.push_back(parse_vector_field("u^2*dx + x*t*u*dt + exp(x)*u^3*du", s));
  fields.push_back(parse_vector_field("erf(t)*dx + x^2*dt + ln(1 + u^2)*du", s));
  FunctionDependencies deps{{"xi", {"x", "t", "u"}}, {"tau", {"x", "t", "u"}}, {"phi", {"x", "t", "u"}}};
  fields.emplace_back(s, std::map<std::string, Expression>{{"x", sym("xi")}, {"t", sym("tau")}, {"u", sym("phi")}},
                      deps);
  for (const auto& X : fields) {
    for (int order = 1; order <= 2; ++order) {
      for (const auto& idx : s.multi_indices(order)) {
        Expression j = jet("u", idx);
        CHECK_MESSAGE(same(prolongation_coefficient(X, j), oracle::recursive_prolongation(X, j)),
                      to_string(X) << " at " << to_string(j));
      }
    }
  }
}

TEST_CASE("two dependent variables") {
  JetSpace s = pair_space();
  VectorField X = parse_vector_field("x*dx - 2*w*dw", s);
  ProlongedField pr = prolong2(X);
  CHECK(same(pr.coefficient(parse("w_x")), parse("-3*w_x")));
  CHECK(same(pr.coefficient(parse("v_xx")), parse("-2*v_xx")));
  CHECK(same(pr.coefficient(parse("w_t")), parse("-2*w_t")));
  CHECK(same(pr.coefficient(parse("v_t")), num(0)));
  for (const auto& idx : s.multi_indices(2)) {
    for (const char* dep : {"v", "w"}) {
      Expression j = jet(dep, idx);
      CHECK(same(prolongation_coefficient(X, j), oracle::recursive_prolongation(X, j)));
    }
  }
}

TEST_CASE("prolongation is linear in the generator") {
  JetSpace s = scalar_space();
  oracle::ExpressionGenerator gen(31, {"x", "t", "u"});
  for (int i = 0; i < 100; ++i) {
    std::map<std::string, Expression> a, b;
    for (const char* c : {"x", "t", "u"}) {
      a[c] = gen.smooth(2);
      b[c] = gen.smooth(2);
    }
    VectorField X(s, a), Y(s, b);
    Expression k = num(gen.rational() + 1);
    ProlongedField pz = prolong2(k * X + Y), px = prolong2(X), py = prolong2(Y);
    for (const auto& idx : s.multi_indices(2)) {
      Expression j = jet("u", idx);
      CHECK(same(pz.coefficient(j), k * px.coefficient(j) + py.coefficient(j)));
    }
  }
}
