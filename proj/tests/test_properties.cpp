#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "support.hpp"

using namespace gzcr;

namespace {

constexpr int kCases = 200;

void check(const testing::PropertyResult& r) {
  INFO(r.summary());
  CHECK(r.cases >= kCases);
  CHECK(r.ok());
}

}  // namespace

TEST_CASE("Koszul sign symmetry") { check(testing::koszul_symmetry(kCases)); }
TEST_CASE("odd nilpotence") { check(testing::odd_nilpotence(kCases)); }
TEST_CASE("graded Leibniz rule for odd partials") { check(testing::leibniz_odd(kCases)); }
TEST_CASE("Leibniz rule for even partials") { check(testing::leibniz_even(kCases)); }
TEST_CASE("commutation relations of partials") { check(testing::partial_commutation(kCases)); }
TEST_CASE("super-Jacobi identity") { check(testing::super_jacobi(kCases)); }
TEST_CASE("supertrace kills supercommutators") { check(testing::supertrace_of_bracket(kCases)); }
TEST_CASE("horizontal differential squares to zero") { check(testing::dh_squared(kCases)); }
TEST_CASE("total derivatives commute") { check(testing::total_derivatives_commute(kCases)); }
TEST_CASE("gauge action composes") { check(testing::gauge_composition(kCases)); }
TEST_CASE("projective representation is a homomorphism") { check(testing::projective_homomorphism(kCases)); }

TEST_CASE("generators are reproducible") {
  testing::Gen a(5);
  testing::Gen b(5);
  auto pools = testing::scalar_pools();
  for (int k = 0; k < 20; ++k) {
    CHECK(a.poly(Parity::Odd, pools.evens, pools.odds) == b.poly(Parity::Odd, pools.evens, pools.odds));
  }
  testing::Gen g(9);
  for (int k = 0; k < 50; ++k) {
    Parity p = g.parity();
    GradedPoly f = g.poly(p, pools.evens, pools.odds);
    CHECK((f.is_zero() || f.parity() == p));
  }
}
