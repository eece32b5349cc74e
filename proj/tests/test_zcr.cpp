#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "support.hpp"

using namespace gzcr;

namespace {

const BlockSignature sig{2, 1};

SuperMatrix E(int i, int j) { return SuperMatrix::unit(sig, i - 1, j - 1); }

ZCRDocument beta() { return load_zcr("builtin:zcr/removable_beta.zcr"); }

}  // namespace

TEST_CASE("MC residual of the removable family vanishes") { CHECK(mc_residual(beta().family).is_zero()); }

TEST_CASE("MC residual of the corrected non-removable family vanishes") {
  CHECK(mc_residual(load_zcr("builtin:zcr/das_alpha_corrected.zcr").family).is_zero());
}

TEST_CASE("MC residual of the transcribed non-removable family is nonzero") {
  // the printed b22 term breaks the ZCR; see the fixture metadata
  CHECK_FALSE(mc_residual(load_zcr("builtin:zcr/das_alpha.zcr").family).is_zero());
}

TEST_CASE("zero family has zero residual") {
  auto doc = beta();
  ZCRFamily z = doc.family.with_matrices(SuperMatrix(sig), SuperMatrix(sig));
  CHECK(mc_residual(z).is_zero());
}

TEST_CASE("odd connection matrices are rejected") {
  auto doc = beta();
  CHECK_THROWS(doc.family.with_matrices(E(1, 3), SuperMatrix(sig)).validate());
}

TEST_CASE("gauge transformations") {
  auto doc = beta();
  const ZCRFamily& z = doc.family;
  ZCRFamily same = gauge_transform(z, SuperMatrix::identity(sig));
  CHECK(same.A == z.A);
  CHECK(same.B == z.B);

  SuperMatrix s = SuperMatrix::identity(sig);
  s.at(0, 1) = GradedPoly::variable(z.parameter);
  ZCRFamily removed = gauge_transform(z, *inverse(s));
  CHECK(removed.A == z.at(0).A);
  CHECK(removed.B == z.at(0).B);

  SuperMatrix d = SuperMatrix::identity(sig);
  d.at(0, 0) = GradedPoly(2);
  d.at(2, 2) = GradedPoly(-3);
  ZCRFamily constant = z.with_matrices(E(1, 2) + E(2, 1), E(1, 3) * E(3, 2));
  ZCRFamily conj = gauge_transform(constant, d);
  CHECK(conj.A == d * constant.A * *inverse(d));
  CHECK(conj.B == d * constant.B * *inverse(d));

  CHECK_THROWS(gauge_transform(z, E(1, 1)));
}

TEST_CASE("removability residual") {
  auto doc = beta();
  const ZCRFamily& z = doc.family;
  CHECK(removability_residual(z, E(1, 2)).is_zero());
  CHECK_FALSE(removability_residual(z, SuperMatrix(sig)).is_zero());
  ZCRFamily frozen = z.at(0);
  CHECK(removability_residual(frozen, SuperMatrix(sig)).is_zero());
  auto das = load_zcr("builtin:zcr/das_alpha_corrected.zcr");
  CHECK_FALSE(removability_residual(das.family, SuperMatrix(sig)).is_zero());
}

TEST_CASE("solver finds E12 for the removable family") {
  auto doc = beta();
  AnsatzSpec spec;
  spec.exponent_min = -1;
  spec.exponent_max = 1;
  spec.lambda_degree = 2;
  auto result = solve_removability(doc.family, spec);
  auto* sol = std::get_if<RemovabilitySolution>(&result);
  REQUIRE(sol != nullptr);
  CHECK(sol->verified);
  CHECK(sol->contains(E(1, 2)));
  CHECK_FALSE(sol->contains(E(2, 1)));
  CHECK(removability_residual(doc.family, sol->particular).is_zero());
  for (const auto& k : sol->kernel) CHECK(removability_residual(doc.family, sol->particular + k).is_zero());
}

TEST_CASE("parameter-independent family admits Q = 0") {
  auto doc = beta();
  AnsatzSpec spec;
  spec.max_jet_order = 1;
  spec.max_field_degree = 1;
  auto result = solve_removability(doc.family.at(0), spec);
  auto* sol = std::get_if<RemovabilitySolution>(&result);
  REQUIRE(sol != nullptr);
  CHECK(sol->contains(SuperMatrix(sig)));
}

TEST_CASE("solver certifies non-removability within the ansatz") {
  auto das = load_zcr("builtin:zcr/das_alpha_corrected.zcr");
  AnsatzSpec spec;
  spec.exponent_min = -4;
  spec.exponent_max = 1;
  auto result = solve_removability(das.family, spec);
  auto* cert = std::get_if<NoSolutionCertificate>(&result);
  REQUIRE(cert != nullptr);
  CHECK(cert->verified);
  CHECK_FALSE(cert->value.is_zero());
  CHECK_FALSE(cert->combination.empty());
}

TEST_CASE("ansatz size cap") {
  auto das = load_zcr("builtin:zcr/das_alpha_corrected.zcr");
  AnsatzSpec spec;
  spec.exponent_min = -4;
  spec.exponent_max = 1;
  spec.size_cap = 10;
  CHECK_THROWS_AS(solve_removability(das.family, spec), AnsatzTooLarge);
}

TEST_CASE("gauge integration") {
  Variable lam = Variable::parameter("lam", false);
  SuperMatrix s = integrate_gauge(E(1, 2), lam, 0);
  SuperMatrix expected = SuperMatrix::identity(sig);
  expected.at(0, 1) = GradedPoly::variable(lam);
  CHECK(s == expected);
  CHECK(integrate_gauge(SuperMatrix(sig), lam, 0) == SuperMatrix::identity(sig));
  SuperMatrix shifted = integrate_gauge(E(1, 2), lam, 2);
  expected.at(0, 1) = GradedPoly::variable(lam) - GradedPoly(2);
  CHECK(shifted == expected);
  SuperMatrix diag = GradedPoly(3) * E(1, 1) - GradedPoly(3) * E(2, 2);
  CHECK_THROWS_AS(integrate_gauge(diag, lam, 0), IntegrationFailure);
}

TEST_CASE("single-term correction search recovers a perturbed exponent") {
  auto das = load_zcr("builtin:zcr/das_alpha_corrected.zcr");
  const ZCRFamily& z = das.family;
  const Variable eps = z.parameter;
  SuperMatrix a = z.A;
  std::optional<TermCorrection> planted;
  for (int i = 0; i < a.size() && !planted; ++i) {
    for (int j = 0; j < a.size() && !planted; ++j) {
      for (const auto& [m, c] : a.at(i, j).terms()) {
        if (m.exponent(eps) == 0) continue;
        GradedPoly original = GradedPoly::term(m, c);
        GradedPoly shifted = GradedPoly::term(m.with_exponent(eps, m.exponent(eps) + 1), c);
        a.at(i, j) = a.at(i, j) - original + shifted;
        planted = TermCorrection{'A', i, j, shifted, original};
        break;
      }
    }
  }
  REQUIRE(planted.has_value());
  ZCRFamily broken = z.with_matrices(a, z.B);
  REQUIRE_FALSE(mc_residual(broken).is_zero());
  auto fixes = single_term_corrections(broken, eps);
  bool recovered = std::any_of(fixes.begin(), fixes.end(), [&](const TermCorrection& t) {
    return t.matrix == 'A' && t.row == planted->row && t.col == planted->col && t.printed == planted->printed &&
           t.replacement == planted->replacement;
  });
  CHECK(recovered);
}

TEST_CASE("single-term correction search finds nothing for the transcribed family") {
  auto das = load_zcr("builtin:zcr/das_alpha.zcr");
  CHECK(single_term_corrections(das.family, das.family.parameter).empty());
}
