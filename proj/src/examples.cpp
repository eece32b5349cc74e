#include "gzcr/examples.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace gzcr {

std::string CompletionAnsatz::describe(const Variable& param) const {
  std::ostringstream os;
  os << "nonlocal degree <= " << nonlocal_degree << ", jet order <= " << jet_order << ", jet degree <= " << jet_degree
     << ", " << param.name() << "-powers in [" << exponent_min << ", " << exponent_max << "]";
  return os.str();
}

std::map<Variable, std::vector<Monomial>> completion_candidates(const Covering& c, const Variable& param,
                                                                const CompletionAnsatz& ansatz) {
  std::vector<std::pair<Monomial, int>> nonlocal_part{{Monomial(), 0}};
  for (const auto& v : c.nonlocals()) {
    std::size_t n = nonlocal_part.size();
    for (std::size_t k = 0; k < n; ++k) {
      int top = v.is_odd() ? 1 : ansatz.nonlocal_degree;
      for (int e = 1; e <= top && nonlocal_part[k].second + e <= ansatz.nonlocal_degree; ++e) {
        auto prod = Monomial::multiply(nonlocal_part[k].first, Monomial::of(v, e));
        nonlocal_part.emplace_back(prod->first, nonlocal_part[k].second + e);
      }
    }
  }
  auto jets = jet_monomials(*c.system(), ansatz.jet_order, ansatz.jet_degree, ansatz.jet_degree);
  int lo = param.invertible() ? ansatz.exponent_min : std::max(0, ansatz.exponent_min);
  std::map<Variable, std::vector<Monomial>> out;
  for (const auto& v : c.nonlocals()) {
    auto& list = out[v];
    for (const auto& [nm, deg] : nonlocal_part) {
      for (const auto& jm : jets) {
        auto base = Monomial::multiply(nm, jm);
        if (!base || base->first.parity() != v.parity()) continue;
        for (int e = lo; e <= ansatz.exponent_max; ++e) {
          list.push_back(e == 0 ? base->first : Monomial::multiply(base->first, Monomial::of(param, e))->first);
        }
      }
    }
    std::sort(list.begin(), list.end());
  }
  return out;
}

bool ExampleReport::passed() const {
  return std::none_of(steps.begin(), steps.end(), [](const Step& s) { return s.status == StepStatus::Fail; });
}

namespace {

const char* status_word(StepStatus s) {
  switch (s) {
    case StepStatus::Pass:
      return "PASS";
    case StepStatus::Fail:
      return "FAIL";
    case StepStatus::Info:
      return "INFO";
  }
  return "?";
}

}  // namespace

std::string ExampleReport::text() const {
  std::ostringstream os;
  os << key << ": " << title << "\n";
  for (const auto& s : steps) {
    os << "  [" << status_word(s.status) << "] " << s.name;
    if (!s.detail.empty()) os << ": " << s.detail;
    os << "\n";
  }
  os << "  result: " << (passed() ? "PASS" : "FAIL") << "\n";
  return os.str();
}

nlohmann::json ExampleReport::to_json() const {
  nlohmann::json j;
  j["key"] = key;
  j["title"] = title;
  j["passed"] = passed();
  j["steps"] = nlohmann::json::array();
  for (const auto& s : steps) j["steps"].push_back({{"name", s.name}, {"status", status_word(s.status)}, {"detail", s.detail}});
  j["data"] = data;
  return j;
}

namespace {

StepStatus verdict(bool ok) { return ok ? StepStatus::Pass : StepStatus::Fail; }

std::string one_line(const SuperMatrix& m) {
  std::ostringstream os;
  os << m.signature().to_string() << " [";
  for (int i = 0; i < m.size(); ++i) {
    for (int j = 0; j < m.size(); ++j) os << (j ? ", " : i ? "; " : "") << m.at(i, j).to_string();
  }
  os << "]";
  return os.str();
}

std::size_t nonzero_entries(const SuperMatrix& m) {
  std::size_t n = 0;
  for (int i = 0; i < m.size(); ++i) {
    for (int j = 0; j < m.size(); ++j) n += m.at(i, j).is_zero() ? 0 : 1;
  }
  return n;
}

bool all_zero(const std::map<Variable, GradedPoly>& r) {
  return std::all_of(r.begin(), r.end(), [](const auto& kv) { return kv.second.is_zero(); });
}

bool all_zero(const std::map<Variable, StructureResidual>& r) {
  return std::all_of(r.begin(), r.end(), [](const auto& kv) { return kv.second.is_zero(); });
}

void flatness_step(ExampleReport& rep, const CoveringDocument& cov) {
  bool ok = all_zero(flatness_residual(*cov.covering));
  rep.steps.push_back({"flatness of " + cov.covering->name(), verdict(ok), ok ? "D~_x(v_t) = D~_t(v_x)" : "nonzero"});
  rep.data["flat"] = ok;
}

void flows_match_step(ExampleReport& rep, const Covering& built, const Covering& printed) {
  bool x_ok = true;
  bool t_ok = true;
  for (const auto& v : printed.nonlocals()) {
    x_ok = x_ok && built.flow(v).x == printed.flow(v).x;
    t_ok = t_ok && built.flow(v).t == printed.flow(v).t;
  }
  rep.steps.push_back({"covering_from_zcr reproduces the x-flows", verdict(x_ok), printed.name()});
  rep.steps.push_back({"covering_from_zcr reproduces the t-flows", verdict(t_ok), printed.name()});
}

GeneralField with_added(GeneralField f, const std::vector<std::pair<Variable, GradedPoly>>& added) {
  for (const auto& [v, p] : added) f.phi[v] += p;
  return f;
}

bool same_field(const GeneralField& a, const GeneralField& b) {
  auto strip = [](std::map<Variable, GradedPoly> m) {
    for (auto it = m.begin(); it != m.end();) it = it->second.is_zero() ? m.erase(it) : std::next(it);
    return m;
  };
  return a.a == b.a && a.b == b.b && strip(a.omega) == strip(b.omega) && strip(a.phi) == strip(b.phi);
}

// Completes the transcribed seed and compares with the stored derived field.
void shadow_steps(ExampleReport& rep, const CoveringDocument& cov, const std::string& seed_ref,
                  const std::string& derived_ref, const std::string& label) {
  const Covering& c = *cov.covering;
  const Variable param = *cov.family;
  ShadowDocument seed = load_shadow(seed_ref, cov);
  ShadowDocument derived = load_shadow(derived_ref, cov);
  CompletionAnsatz ansatz;
  auto candidates = completion_candidates(c, param, ansatz);
  ShadowField vseed = verticalize(seed.field, c);

  if (!(derived.rate == GradedPoly(1))) {
    auto plain = complete_shadow(c, param, GradedPoly(1), vseed, candidates);
    rep.steps.push_back({label + " completion with d/d" + param.name(), StepStatus::Info,
                         plain.found ? "found" : "none within " + ansatz.describe(param)});
    rep.data["completion_unit_rate"] = plain.found;
  }
  auto done = complete_shadow(c, param, derived.rate, vseed, candidates);
  std::ostringstream detail;
  detail << "rate " << derived.rate.to_string() << "; " << done.unknowns << " unknowns, " << done.equations
         << " equations, " << done.free_directions << " free directions";
  rep.steps.push_back({label + " completion found", verdict(done.found), detail.str()});
  nlohmann::json added = nlohmann::json::object();
  for (const auto& [v, p] : done.added) added[v.label()] = p.to_string();
  rep.data["completion_added"] = added;
  rep.data["completion_ansatz"] = ansatz.describe(param);
  if (done.found) {
    bool same = same_field(with_added(seed.field, done.added), derived.field);
    rep.steps.push_back({label + " stored derived field equals seed plus completion", verdict(same),
                         meta_value(derived.meta, "provenance").value_or("")});
  }
  bool zero = all_zero(fn_structure_residual(c, param, verticalize(derived.field, c), derived.rate));
  rep.steps.push_back({label + " structure residual", verdict(zero), zero ? "zero" : "nonzero"});
}

ExampleReport example_kdv() {
  ExampleReport rep{"kdv", "Korteweg-de Vries equation", {}, {}};
  auto sys = load_system("kdv");
  Variable u12 = Variable::jet("u12", Parity::Even);
  GradedPoly expected = parse_expression("-u12_xxx - 6*u12*u12_x", SymbolTable::for_system(*sys));
  bool ok = total_t(*sys, GradedPoly::variable(u12)) == expected;
  rep.steps.push_back({"total_t(u12)", verdict(ok), total_t(*sys, GradedPoly::variable(u12)).to_string()});
  auto again = parse_system(Source{"kdv (printed)", format_system(*sys), false}).system;
  rep.steps.push_back({"canonical print round trip", verdict(again->rhs() == sys->rhs()), ""});
  rep.data["rhs"] = sys->rhs(u12).to_string();
  return rep;
}

ExampleReport example_kb3() {
  ExampleReport rep{"kb3", "bosonic limit of the a = 4 component system", {}, {}};
  auto sys = load_system("kb3");
  auto limit = bosonic_limit(expand_superfield({4}), "kb3");
  bool ok = limit.rhs() == sys->rhs();
  rep.steps.push_back({"bosonic_limit(expand_superfield(a = 4)) equals the kb3 fixture", verdict(ok), ""});
  for (const auto& [u, f] : limit.rhs()) rep.data["rhs"][u.label()] = f.to_string();
  return rep;
}

ExampleReport example_skdv_a4() {
  ExampleReport rep{"skdv.a4", "N=2 superfield expansion", {}, {}};
  auto fixture = load_system("skdv.a4");
  auto expanded = expand_superfield({4});
  for (const auto& u : fixture->space().dependents) {
    bool ok = expanded.rhs(u) == fixture->rhs(u);
    rep.steps.push_back({"a = 4 component " + u.label(), verdict(ok), ""});
    rep.data["a4"][u.label()] = expanded.rhs(u).to_string();
  }
  auto general = load_system("skdv.a");
  Variable a = general->parameters().front();
  auto symbolic = expand_superfield({GradedPoly::variable(a)});
  bool same = symbolic.rhs() == general->rhs();
  rep.steps.push_back({"symbolic a expansion equals the skdv.a fixture", verdict(same), ""});
  Variable u12 = Variable::jet("u12", Parity::Even);
  const GradedPoly& f = symbolic.rhs(u12);
  Monomial uxxx = Monomial::of(u12.prolonged(3));
  Monomial uux = Monomial::multiply(Monomial::of(u12), Monomial::of(u12.prolonged(1)))->first;
  bool kdv_part = f.coefficient(uxxx) == GaussianRational(-1) && f.coefficient(uux) == GaussianRational(-6);
  rep.steps.push_back({"u12 component contains -u12_xxx - 6*u12*u12_x for symbolic a", verdict(kdv_part), ""});
  auto kk = bosonic_limit(expand_superfield({1}));
  rep.steps.push_back({"bosonic limit at a = 1", StepStatus::Info,
                       std::to_string(kk.space().dependents.size()) + " even equations"});
  return rep;
}

ExampleReport example_das() {
  ExampleReport rep{"skdv.das-zcr", "sl(2|1) family with a non-removable parameter", {}, {}};
  auto printed = load_zcr("builtin:zcr/das_alpha.zcr");
  SuperMatrix r = mc_residual(printed.family);
  rep.steps.push_back({"MC residual of the transcribed matrices", verdict(r.is_zero()),
                       r.is_zero() ? "zero" : std::to_string(nonzero_entries(r)) + " nonzero entries"});
  rep.data["transcribed_residual_zero"] = r.is_zero();
  if (!r.is_zero()) {
    auto fixes = single_term_corrections(printed.family, printed.family.parameter);
    std::string found;
    for (const auto& f : fixes) found += (found.empty() ? "" : "; ") + f.describe();
    rep.steps.push_back({"single-term correction search (shifts within 2)", verdict(fixes.size() == 1),
                         fixes.empty() ? "no single-term fix exists" : found});
    rep.data["single_term_fixes"] = fixes.size();
  }

  auto corrected = load_zcr("builtin:zcr/das_alpha_corrected.zcr");
  bool mc = mc_residual(corrected.family).is_zero();
  rep.steps.push_back({"MC residual of the corrected family", verdict(mc),
                       meta_value(corrected.meta, "derivation").value_or("")});

  AnsatzSpec spec;
  spec.exponent_min = -4;
  spec.exponent_max = 1;
  auto result = solve_removability(corrected.family, spec);
  if (auto* cert = std::get_if<NoSolutionCertificate>(&result)) {
    std::ostringstream os;
    os << "no Q within the ansatz (" << spec.describe(corrected.family.parameter) << "; " << cert->basis_size
       << " unknowns, " << cert->equations << " equations); contradiction:";
    for (const auto& [label, y] : cert->combination) os << " " << y.to_string() << " * {" << label << "}";
    os << " = 0 but sums to " << cert->value.to_string()
       << ". Nonexistence outside this ansatz is not decided.";
    rep.steps.push_back({"removability", verdict(cert->verified), os.str()});
    rep.data["removability"] = "no solution within ansatz";
  } else {
    rep.steps.push_back({"removability", StepStatus::Fail, "a gauge generator Q exists within the ansatz"});
    rep.data["removability"] = "solution";
  }

  auto chart = ProjectiveChart::standard(corrected.family.A.signature());
  auto cov = load_covering("builtin:coverings/skdv_cover11.cov");
  flows_match_step(rep, covering_from_zcr(corrected.family, chart), *cov.covering);
  return rep;
}

ExampleReport example_removable() {
  ExampleReport rep{"skdv.removable-zcr", "sl(2|1) family with a removable parameter", {}, {}};
  auto doc = load_zcr("builtin:zcr/removable_beta.zcr");
  const ZCRFamily& z = doc.family;
  bool mc = mc_residual(z).is_zero();
  rep.steps.push_back({"MC residual", verdict(mc), mc ? "zero" : "nonzero"});

  SuperMatrix q = load_matrix("builtin:matrices/removable_q.mat", doc.symbols, z.system.get()).matrix;
  SuperMatrix s_expected = load_matrix("builtin:matrices/removable_s.mat", doc.symbols, z.system.get()).matrix;
  bool rq = removability_residual(z, q).is_zero();
  rep.steps.push_back({"removability residual at Q = E12", verdict(rq), ""});

  AnsatzSpec spec;
  spec.lambda_degree = 2;
  auto result = solve_removability(z, spec);
  std::vector<SuperMatrix> solver_qs;
  if (auto* sol = std::get_if<RemovabilitySolution>(&result)) {
    std::ostringstream os;
    os << spec.describe(z.parameter) << "; particular " << one_line(sol->particular) << " plus "
       << sol->kernel.size() << " kernel directions";
    rep.steps.push_back({"solve_removability finds Q", verdict(sol->verified), os.str()});
    rep.steps.push_back({"solution space contains E12", verdict(sol->contains(q)), ""});
    solver_qs.push_back(sol->particular);
    for (const auto& k : sol->kernel) solver_qs.push_back(sol->particular + k);
    rep.data["kernel_dimension"] = sol->kernel.size();
  } else {
    rep.steps.push_back({"solve_removability finds Q", StepStatus::Fail, "no solution within the ansatz"});
  }

  SuperMatrix s = integrate_gauge(q, z.parameter, 0);
  rep.steps.push_back({"integrate_gauge(E12, 0)", verdict(s == s_expected), one_line(s)});
  auto s_inv = inverse(s);
  bool round = s_inv && gauge_transform(z, *s_inv).A == z.at(0).A && gauge_transform(z, *s_inv).B == z.at(0).B;
  rep.steps.push_back({"gauge round trip: beta^(S^-1) = beta at lam = 0", verdict(round), ""});

  auto chart = ProjectiveChart::standard(z.A.signature());
  auto cov = load_covering("builtin:coverings/skdv_removable.cov");
  Covering built = covering_from_zcr(z, chart);
  flows_match_step(rep, built, *cov.covering);
  flatness_step(rep, cov);

  ShadowDocument shadow = load_shadow("builtin:shadows/skdv_removable.shd", cov);
  ShadowField from_q = shadow_from_gmatrix(q, chart);
  bool same = from_q.phi == verticalize(shadow.field, *cov.covering).phi && from_q.omega.empty();
  rep.steps.push_back({"shadow_from_gmatrix(E12) = d/dw", verdict(same), ""});
  bool fn = all_zero(fn_structure_residual(*cov.covering, z.parameter, verticalize(shadow.field, *cov.covering)));
  rep.steps.push_back({"structure residual of d/dw", verdict(fn), ""});

  bool implication = true;
  for (const auto& qq : solver_qs) {
    if (!removability_residual(z, qq).is_zero()) continue;
    implication = implication && all_zero(fn_structure_residual(built, z.parameter, shadow_from_gmatrix(qq, chart)));
  }
  rep.steps.push_back({"every solver Q yields a zero structure residual", verdict(implication),
                       std::to_string(solver_qs.size()) + " matrices"});

  auto d = diagram_check(z, q, chart);
  rep.steps.push_back({"diagram check at gamma = E12", verdict(d.commutes), ""});
  return rep;
}

ExampleReport example_gardner() {
  ExampleReport rep{"kdv.gardner", "Gardner's deformation of KdV and its Galilean shadow", {}, {}};
  auto cov = load_covering("builtin:coverings/kdv_gardner.cov");
  flatness_step(rep, cov);
  shadow_steps(rep, cov, "builtin:shadows/kdv_gardner_seed.shd", "builtin:shadows/kdv_gardner.shd", "Galilean shadow");
  return rep;
}

ExampleReport example_kb3_cover() {
  ExampleReport rep{"kb3.cover", "covering over kb3 and its scaling shadow", {}, {}};
  auto cov = load_covering("builtin:coverings/kb3.cov");
  flatness_step(rep, cov);
  shadow_steps(rep, cov, "builtin:shadows/kb3_seed.shd", "builtin:shadows/kb3.shd", "scaling shadow");
  return rep;
}

ExampleReport example_cover11() {
  ExampleReport rep{"skdv.cover11", "(1|1) covering over skdv.a4 and its scaling shadow", {}, {}};
  auto cov = load_covering("builtin:coverings/skdv_cover11.cov");
  flatness_step(rep, cov);
  auto corrected = load_zcr("builtin:zcr/das_alpha_corrected.zcr");
  flows_match_step(rep, covering_from_zcr(corrected.family, ProjectiveChart::standard(corrected.family.A.signature())),
                   *cov.covering);
  shadow_steps(rep, cov, "builtin:shadows/skdv_cover11_seed.shd", "builtin:shadows/skdv_cover11.shd",
               "scaling shadow");
  auto derived = load_shadow("builtin:shadows/skdv_cover11.shd", cov);
  Variable f = Variable::nonlocal("f", Parity::Odd);
  auto it = derived.field.phi.find(f);
  std::string df = it == derived.field.phi.end() ? "0" : it->second.to_string();
  rep.steps.push_back({"d/df component", StepStatus::Info, df});
  rep.data["df_component"] = df;
  return rep;
}

}  // namespace

const std::vector<ExampleInfo>& example_registry() {
  static const std::vector<ExampleInfo> registry = {
      {"kdv", "Korteweg-de Vries equation"},
      {"kb3", "bosonic limit of the a = 4 component system"},
      {"skdv.a4", "N=2 superfield expansion"},
      {"skdv.das-zcr", "sl(2|1) family with a non-removable parameter"},
      {"skdv.removable-zcr", "sl(2|1) family with a removable parameter"},
      {"kdv.gardner", "Gardner's deformation of KdV and its Galilean shadow"},
      {"kb3.cover", "covering over kb3 and its scaling shadow"},
      {"skdv.cover11", "(1|1) covering over skdv.a4 and its scaling shadow"},
  };
  return registry;
}

ExampleReport run_example(const std::string& key) {
  if (key == "kdv") return example_kdv();
  if (key == "kb3") return example_kb3();
  if (key == "skdv.a4") return example_skdv_a4();
  if (key == "skdv.das-zcr") return example_das();
  if (key == "skdv.removable-zcr") return example_removable();
  if (key == "kdv.gardner") return example_gardner();
  if (key == "kb3.cover") return example_kb3_cover();
  if (key == "skdv.cover11") return example_cover11();
  throw std::out_of_range("unknown example " + key);
}

}  // namespace gzcr
