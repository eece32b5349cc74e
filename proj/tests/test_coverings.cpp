#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "support.hpp"

using namespace gzcr;

namespace {

const BlockSignature sig{2, 1};

SuperMatrix E(int i, int j) { return SuperMatrix::unit(sig, i - 1, j - 1); }

const Variable w = Variable::nonlocal("w", Parity::Even);
const Variable f = Variable::nonlocal("f", Parity::Odd);

GradedPoly W(int e = 1) { return GradedPoly::variable(w, e); }

bool all_zero(const std::map<Variable, GradedPoly>& m) {
  return std::all_of(m.begin(), m.end(), [](const auto& kv) { return kv.second.is_zero(); });
}

bool all_zero(const std::map<Variable, StructureResidual>& m) {
  return std::all_of(m.begin(), m.end(), [](const auto& kv) { return kv.second.is_zero(); });
}

}  // namespace

TEST_CASE("standard chart") {
  auto chart = ProjectiveChart::standard(sig);
  REQUIRE(chart.nonlocals().size() == 2);
  CHECK(chart.nonlocals()[0] == w);
  CHECK(chart.nonlocals()[1] == f);
  auto big = ProjectiveChart::standard(BlockSignature{3, 2});
  CHECK(big.w.size() == 2);
  CHECK(big.f.size() == 2);
}

TEST_CASE("projective representation oracles") {
  auto chart = ProjectiveChart::standard(sig);
  CHECK(projective_rep(SuperMatrix::identity(sig), chart).is_zero());
  CHECK(projective_rep(E(1, 2), chart).component(w) == GradedPoly(1));
  CHECK(projective_rep(E(1, 2), chart).component(f).is_zero());
  CHECK(projective_rep(E(2, 1), chart).component(w) == -W(2));
  auto chart3 = ProjectiveChart::standard(sig, GaussianRational(3));
  CHECK(projective_rep(E(1, 2), chart3).component(w) == GradedPoly(3));
}

TEST_CASE("projective representation preserves brackets of units") {
  auto chart = ProjectiveChart::standard(sig);
  for (int i = 1; i <= 3; ++i) {
    for (int j = 1; j <= 3; ++j) {
      for (int k = 1; k <= 3; ++k) {
        for (int l = 1; l <= 3; ++l) {
          RepVectorField lhs = projective_rep(supercommutator(E(i, j), E(k, l)), chart);
          RepVectorField rhs = commutator(projective_rep(E(i, j), chart), projective_rep(E(k, l), chart));
          CAPTURE(i);
          CAPTURE(j);
          CAPTURE(k);
          CAPTURE(l);
          CHECK(lhs.component(w) == rhs.component(w));
          CHECK(lhs.component(f) == rhs.component(f));
        }
      }
    }
  }
}

TEST_CASE("covering from the removable family matches the fixture") {
  auto doc = load_zcr("builtin:zcr/removable_beta.zcr");
  auto chart = ProjectiveChart::standard(sig);
  Covering built = covering_from_zcr(doc.family, chart);
  auto cov = load_covering("builtin:coverings/skdv_removable.cov");
  for (const auto& v : chart.nonlocals()) {
    CHECK(built.flow(v).x == cov.covering->flow(v).x);
    CHECK(built.flow(v).t == cov.covering->flow(v).t);
  }
  SymbolTable s = cov.symbols;
  CHECK(built.flow(w).x == parse_expression("lam^2 + 2*lam*w + w^2 + u0^2 + u12 - f*u2 + i*f*u1", s));
  CHECK(built.flow(f).x == parse_expression("lam*f + f*w + i*f*u0 + u2 + i*u1", s));
}

TEST_CASE("covering from the corrected non-removable family matches the fixture") {
  auto doc = load_zcr("builtin:zcr/das_alpha_corrected.zcr");
  Covering built = covering_from_zcr(doc.family, ProjectiveChart::standard(sig));
  auto cov = load_covering("builtin:coverings/skdv_cover11.cov");
  CHECK(built.flow(w).x ==
        parse_expression("-eps*w^2 + f*u2 - f*u1*i + eps^-1*(w - u12 - u0^2) + eps^-2*i*u0", cov.symbols));
  CHECK(built.flow(f).x == cov.covering->flow(f).x);
  CHECK(built.flow(w).t == cov.covering->flow(w).t);
  CHECK(built.flow(f).t == cov.covering->flow(f).t);
}

TEST_CASE("zero matrices give zero flows") {
  auto doc = load_zcr("builtin:zcr/removable_beta.zcr");
  Covering built = covering_from_zcr(doc.family.with_matrices(SuperMatrix(sig), SuperMatrix(sig)),
                                     ProjectiveChart::standard(sig));
  for (const auto& [v, fl] : built.flows()) {
    CHECK(fl.x.is_zero());
    CHECK(fl.t.is_zero());
  }
}

TEST_CASE("flatness") {
  for (const char* ref : {"builtin:coverings/kdv_gardner.cov", "builtin:coverings/kb3.cov",
                          "builtin:coverings/skdv_cover11.cov", "builtin:coverings/skdv_removable.cov"}) {
    INFO(ref);
    CHECK(all_zero(flatness_residual(*load_covering(ref).covering)));
  }
}

TEST_CASE("Gardner covering without the quadratic term is not flat") {
  auto doc = load_covering("builtin:coverings/kdv_gardner.cov");
  const Covering& c = *doc.covering;
  GradedPoly quad = parse_expression("-eps*w^2", doc.symbols);
  std::map<Variable, Covering::Flow> flows = c.flows();
  flows[w].x -= quad;
  Covering broken("broken", c.system(), c.nonlocals(), c.parameters(), flows);
  CHECK_FALSE(all_zero(flatness_residual(broken)));
}

TEST_CASE("covering validation") {
  auto doc = load_covering("builtin:coverings/kdv_gardner.cov");
  const Covering& c = *doc.covering;
  std::map<Variable, Covering::Flow> flows = c.flows();
  flows[w].x = GradedPoly::variable(Variable::jet("u0", Parity::Even));
  CHECK_THROWS(Covering("bad", c.system(), c.nonlocals(), c.parameters(), flows));
  std::map<Variable, Covering::Flow> odd = c.flows();
  odd[w].x = GradedPoly::variable(f);
  CHECK_THROWS(Covering("bad", c.system(), {w, f}, c.parameters(), odd));
}

TEST_CASE("prolonged total derivatives") {
  auto doc = load_covering("builtin:coverings/kdv_gardner.cov");
  const Covering& c = *doc.covering;
  CHECK(c.dx(W()) == c.flow(w).x);
  CHECK(c.dt(W()) == c.flow(w).t);
  GradedPoly p = parse_expression("w*u12", doc.symbols);
  CHECK(c.dx(p) == c.flow(w).x * GradedPoly::variable(Variable::jet("u12", Parity::Even)) +
                       W() * GradedPoly::variable(Variable::jet("u12", Parity::Even, 1)));
}

TEST_CASE("shadow from a matrix") {
  auto chart = ProjectiveChart::standard(sig);
  ShadowField x = shadow_from_gmatrix(E(1, 2), chart);
  CHECK(x.phi[w] == GradedPoly(1));
  CHECK(x.phi[f].is_zero());
  CHECK(x.omega.empty());
  CHECK(shadow_from_gmatrix(SuperMatrix(sig), chart).is_zero());
  auto chart2 = ProjectiveChart::standard(sig, GaussianRational(2));
  CHECK(shadow_from_gmatrix(E(2, 1), chart2).phi[w] == GaussianRational(mpq_class(-1, 2)) * W(2));
  CHECK_THROWS(shadow_from_gmatrix(E(1, 3), chart));
}

TEST_CASE("verticalization") {
  auto doc = load_covering("builtin:coverings/kdv_gardner.cov");
  const Covering& c = *doc.covering;
  GeneralField g;
  g.a = GradedPoly(2);
  g.phi[w] = GradedPoly(1);
  ShadowField v = verticalize(g, c);
  CHECK(v.phi[w] == GradedPoly(1) - GradedPoly(2) * c.flow(w).x);
  Variable u12 = Variable::jet("u12", Parity::Even);
  CHECK(v.omega[u12] == -GradedPoly(2) * GradedPoly::variable(u12.prolonged(1)));
}

TEST_CASE("structure equation") {
  auto rem = load_covering("builtin:coverings/skdv_removable.cov");
  const Covering& c = *rem.covering;
  ShadowField dw;
  dw.phi[w] = GradedPoly(1);
  CHECK(all_zero(fn_structure_residual(c, *rem.family, dw)));
  ShadowField df;
  df.phi[f] = GradedPoly::variable(f);
  CHECK_FALSE(all_zero(fn_structure_residual(c, *rem.family, df)));

  auto gardner = load_covering("builtin:coverings/kdv_gardner.cov");
  auto frozen = gardner.covering->flows();
  Variable eps = *gardner.family;
  for (auto& [v, fl] : frozen) {
    fl.x = substitute(fl.x, {{eps, GradedPoly(1)}});
    fl.t = substitute(fl.t, {{eps, GradedPoly(1)}});
  }
  Covering fixed("fixed", gardner.covering->system(), {w}, {}, frozen);
  CHECK(all_zero(fn_structure_residual(fixed, eps, ShadowField{})));

  for (const char* name : {"kdv_gardner", "kb3", "skdv_cover11"}) {
    INFO(name);
    std::string cov_ref = std::string("builtin:coverings/") + name + ".cov";
    auto cov = load_covering(cov_ref);
    auto shadow = load_shadow(std::string("builtin:shadows/") + name + ".shd", cov);
    CHECK(all_zero(fn_structure_residual(*cov.covering, *cov.family, verticalize(shadow.field, *cov.covering),
                                         shadow.rate)));
    auto seed = load_shadow(std::string("builtin:shadows/") + name + "_seed.shd", cov);
    auto done = complete_shadow(*cov.covering, *cov.family, shadow.rate, verticalize(seed.field, *cov.covering),
                                completion_candidates(*cov.covering, *cov.family, CompletionAnsatz{}));
    CHECK(done.found);
  }
}

TEST_CASE("Gardner shadow has no completion at unit rate") {
  auto cov = load_covering("builtin:coverings/kdv_gardner.cov");
  auto seed = load_shadow("builtin:shadows/kdv_gardner_seed.shd", cov);
  auto done = complete_shadow(*cov.covering, *cov.family, GradedPoly(1), verticalize(seed.field, *cov.covering),
                              completion_candidates(*cov.covering, *cov.family, CompletionAnsatz{}));
  CHECK_FALSE(done.found);
}

TEST_CASE("diagram check") {
  auto doc = load_zcr("builtin:zcr/removable_beta.zcr");
  auto chart = ProjectiveChart::standard(sig);
  CHECK(diagram_check(doc.family, SuperMatrix(sig), chart).commutes);
  CHECK(diagram_check(doc.family, E(1, 2), chart).commutes);
  SuperMatrix g = E(2, 1);
  g.at(0, 0) = GradedPoly::variable(Variable::jet("u0", Parity::Even));
  g.at(0, 2) = GradedPoly::variable(Variable::jet("u1", Parity::Odd));
  CHECK(diagram_check(doc.family, g, chart).commutes);
  CHECK_THROWS(diagram_check(doc.family, E(1, 3), chart));
}

TEST_CASE("homomorphism property on a reduced sample") {
  auto r = testing::projective_homomorphism(40);
  INFO(r.summary());
  CHECK(r.ok());
}
