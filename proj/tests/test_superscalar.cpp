#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "support.hpp"

using namespace gzcr;

namespace {

SymbolTable symbols() {
  SymbolTable s = SymbolTable::for_system(*load_system("skdv.a4"));
  s.declare(testing::theta(1));
  s.declare(testing::theta(2));
  s.declare(testing::eps());
  s.declare(Variable::parameter("lam", false));
  s.declare(Variable::nonlocal("w", Parity::Even));
  s.declare(Variable::nonlocal("f", Parity::Odd));
  return s;
}

GradedPoly P(const std::string& text) { return parse_expression(text, symbols()); }
Variable V(const std::string& name) { return *symbols().find(name); }

}  // namespace

TEST_CASE("gaussian rationals") {
  GaussianRational i = GaussianRational::imaginary_unit();
  CHECK(i * i == GaussianRational(-1));
  GaussianRational z(mpq_class(1, 2), mpq_class(3));
  CHECK(z * z.inverse() == GaussianRational(1));
  CHECK(z.conj() == GaussianRational(mpq_class(1, 2), mpq_class(-3)));
  CHECK_THROWS(GaussianRational(0).inverse());
}

TEST_CASE("Grassmann generators anticommute") {
  GradedPoly t1 = P("th1");
  GradedPoly t2 = P("th2");
  CHECK(t2 * t1 == -(t1 * t2));
  CHECK((t1 * t2).to_string() == "th1*th2");
  CHECK((t1 * t1).is_zero());
}

TEST_CASE("odd squares vanish") {
  GradedPoly s = P("u1 + u2");
  CHECK((s * s).is_zero());
  CHECK(P("u1*u1").is_zero());
}

TEST_CASE("product with an invertible parameter") {
  CHECK(P("(u0 + i*eps^-1)*(u0 - i*eps^-1)") == P("u0^2 + eps^-2"));
  CHECK(P("eps*eps^-1") == GradedPoly(1));
}

TEST_CASE("negative powers need an invertible variable") {
  CHECK_THROWS(GradedPoly::variable(V("u0"), -1));
  CHECK_NOTHROW(GradedPoly::variable(V("eps"), -3));
}

TEST_CASE("odd partial derivatives") {
  CHECK(odd_partial(P("th1*th2"), V("th1")) == P("th2"));
  CHECK(odd_partial(P("th1*th2"), V("th2")) == P("-th1"));
  CHECK(odd_partial(P("u0*th2"), V("th1")).is_zero());
  CHECK_THROWS_AS(odd_partial(P("th1"), V("u0")), ParityError);
}

TEST_CASE("even partial derivatives") {
  CHECK(even_partial(P("eps^-1*u12"), V("eps")) == P("-eps^-2*u12"));
  CHECK(even_partial(P("lam^2 + 2*lam*w"), V("lam")) == P("2*lam + 2*w"));
  CHECK(even_partial(P("-eps*w^2"), V("w")) == P("-2*eps*w"));
  CHECK_THROWS_AS(even_partial(P("u1"), V("u1")), ParityError);
}

TEST_CASE("substitution") {
  std::map<Variable, GradedPoly> zero_odd = {{V("u1"), GradedPoly()}, {V("u2"), GradedPoly()}};
  CHECK(substitute(P("u1*u2"), zero_odd).is_zero());
  CHECK(substitute(P("w - u12"), {{V("w"), P("u12")}}).is_zero());
  GradedPoly fx = P("lam*f + f*w + i*f*u0 + u2 + i*u1");
  auto all = zero_odd;
  all[V("f")] = GradedPoly();
  CHECK(substitute(fx, all).is_zero());
  CHECK_THROWS_AS(substitute(P("u1"), {{V("u1"), P("u0")}}), ParityError);
}

TEST_CASE("units and inverses") {
  auto inv = P("2 + th1*th2").inverse();
  REQUIRE(inv.has_value());
  CHECK(*inv * P("2 + th1*th2") == GradedPoly(1));
  CHECK_FALSE(P("u0").inverse().has_value());
  CHECK_FALSE(P("th1").inverse().has_value());
  CHECK(*P("eps^2").inverse() == P("eps^-2"));
}

TEST_CASE("parity of homogeneous and mixed polynomials") {
  CHECK(P("u1*u2").parity() == Parity::Even);
  CHECK(P("u1*u0").parity() == Parity::Odd);
  CHECK_FALSE(P("u1 + u0").parity_if_homogeneous().has_value());
  CHECK(GradedPoly().parity() == Parity::Even);
}

TEST_CASE("canonical variable order") {
  CHECK(V("th1") < Variable::independent("x"));
  CHECK(Variable::independent("x") < V("u0"));
  CHECK(V("u2") < V("u12"));
  CHECK(V("u12") < V("w"));
  CHECK(V("w") < V("eps"));
  CHECK(V("u0").prolonged(1) < V("u0").prolonged(2));
}

TEST_CASE("property suites hold on a reduced sample") {
  for (const auto& r : {testing::koszul_symmetry(50), testing::odd_nilpotence(50), testing::leibniz_odd(50),
                        testing::leibniz_even(50), testing::partial_commutation(50)}) {
    INFO(r.summary());
    CHECK(r.ok());
  }
}
