#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

#include "gzcr/examples.hpp"

using namespace gzcr;
using nlohmann::json;

namespace {

// Exit codes: 0 verified, 2 verified false, 1 usage or internal error.
constexpr int kOk = 0;
constexpr int kFalse = 2;
constexpr int kError = 1;

std::string param_name(std::string s) {
  if (s == "ε") return "eps";
  if (s == "λ") return "lam";
  return s;
}

Variable find_parameter(const std::vector<Variable>& params, const std::string& name) {
  for (const auto& p : params) {
    if (p.name() == param_name(name)) return p;
  }
  throw std::invalid_argument("parameter " + name + " is not declared");
}

void require_system(const SystemPtr& expected, const SystemPtr& got) {
  if (expected->name() != got->name()) {
    throw std::invalid_argument("family is declared over " + got->name() + ", not " + expected->name());
  }
}

std::string residual_text(const std::map<Variable, StructureResidual>& r) {
  std::ostringstream os;
  for (const auto& [v, c] : r) {
    os << v.label() << " (x): " << c.x.to_string() << "\n";
    os << v.label() << " (t): " << c.t.to_string() << "\n";
  }
  return os.str();
}

SuperMatrix random_even_gamma(const BlockSignature& sig, std::mt19937& rng) {
  SuperMatrix g(sig);
  std::uniform_int_distribution<int> coin(0, 2);
  std::uniform_int_distribution<int> num(-5, 5);
  std::uniform_int_distribution<int> den(1, 3);
  for (int i = 0; i < sig.size(); ++i) {
    for (int j = 0; j < sig.size(); ++j) {
      if (g.position_parity(i, j) != Parity::Even || coin(rng) != 0) continue;
      g.at(i, j) = GradedPoly(GaussianRational(mpq_class(num(rng), den(rng)), mpq_class(num(rng) % 2)));
    }
  }
  return g;
}

struct Context {
  std::string report_path;
  json report = json::object();

  void write() const {
    if (report_path.empty()) return;
    std::ofstream out(report_path);
    if (!out) throw std::runtime_error("cannot write report " + report_path);
    out << report.dump(2) << "\n";
  }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"graded-zcr: zero-curvature representations, coverings and shadows over Z2-graded evolution equations"};
  app.require_subcommand(1);
  Context ctx;
  app.add_option("--report", ctx.report_path, "write a JSON report to this file");

  int code = kOk;
  std::function<void()> action;

  // check-zcr
  std::string system_ref;
  std::string alpha_ref;
  auto* check = app.add_subcommand("check-zcr", "verify the Maurer-Cartan equation D_x B - D_t A - [A, B] = 0");
  check->add_option("system", system_ref)->required();
  check->add_option("alpha", alpha_ref)->required();
  check->callback([&] {
    action = [&] {
      auto sys = load_system(system_ref);
      auto doc = load_zcr(alpha_ref);
      require_system(sys, doc.family.system);
      SuperMatrix r = mc_residual(doc.family);
      ctx.report["command"] = "check-zcr";
      ctx.report["residual_zero"] = r.is_zero();
      ctx.report["residual"] = r.to_string();
      if (r.is_zero()) {
        std::cout << "MC residual: zero\n";
      } else {
        std::cout << "MC residual: nonzero\n" << r.to_string();
        code = kFalse;
      }
    };
  });

  // removability solve
  auto* rem = app.add_subcommand("removability", "gauge removability of the family parameter");
  rem->require_subcommand(1);
  auto* solve = rem->add_subcommand("solve", "search for Q within a finite ansatz");
  std::string param = "";
  AnsatzSpec spec;
  std::string laurent = "-1:1";
  solve->add_option("system", system_ref)->required();
  solve->add_option("alpha", alpha_ref)->required();
  solve->add_option("--param", param, "family parameter (default: the declared family)");
  solve->add_option("--jet-order", spec.max_jet_order, "maximal jet order in Q")->capture_default_str();
  solve->add_option("--grassmann", spec.max_grassmann_degree, "maximal number of odd factors")->capture_default_str();
  solve->add_option("--degree", spec.max_field_degree, "maximal total degree in jet coordinates")->capture_default_str();
  solve->add_option("--laurent", laurent, "exponent window lo:hi for an invertible parameter")->capture_default_str();
  solve->add_option("--lambda-deg", spec.lambda_degree, "degree bound for a polynomial parameter")->capture_default_str();
  solve->callback([&] {
    action = [&] {
      auto colon = laurent.find(':');
      if (colon == std::string::npos) throw std::invalid_argument("--laurent expects lo:hi");
      spec.exponent_min = std::stoi(laurent.substr(0, colon));
      spec.exponent_max = std::stoi(laurent.substr(colon + 1));
      auto sys = load_system(system_ref);
      auto doc = load_zcr(alpha_ref);
      require_system(sys, doc.family.system);
      ZCRFamily z = doc.family;
      if (!param.empty()) z.parameter = find_parameter(doc.parameters, param);
      auto result = solve_removability(z, spec);
      ctx.report["command"] = "removability solve";
      ctx.report["ansatz"] = spec.describe(z.parameter);
      if (auto* sol = std::get_if<RemovabilitySolution>(&result)) {
        std::cout << "ansatz: " << spec.describe(z.parameter) << " (" << sol->basis.size() << " unknowns, "
                  << sol->equations << " equations)\n";
        std::cout << "solution found" << (sol->verified ? " and re-verified" : "") << "\nparticular Q:\n"
                  << sol->particular.to_string() << "kernel directions: " << sol->kernel.size() << "\n";
        for (const auto& k : sol->kernel) std::cout << k.to_string();
        ctx.report["result"] = "solution";
        ctx.report["particular"] = sol->particular.to_string();
        ctx.report["kernel"] = json::array();
        for (const auto& k : sol->kernel) ctx.report["kernel"].push_back(k.to_string());
        ctx.report["verified"] = sol->verified;
      } else {
        const auto& cert = std::get<NoSolutionCertificate>(result);
        std::cout << "ansatz: " << spec.describe(z.parameter) << " (" << cert.basis_size << " unknowns, "
                  << cert.equations << " equations)\n";
        std::cout << "no Q exists within this ansatz; certificate" << (cert.verified ? " (verified)" : "") << ":\n";
        for (const auto& [label, y] : cert.combination) std::cout << "  " << y.to_string() << " * {" << label << "}\n";
        std::cout << "  combination of left-hand sides = 0, of right-hand sides = " << cert.value.to_string() << "\n";
        std::cout << "this does not decide removability outside the ansatz\n";
        ctx.report["result"] = "no solution within ansatz";
        ctx.report["scope"] = "claim limited to the ansatz; global nonexistence is not decided";
        ctx.report["certificate"] = json::array();
        for (const auto& [label, y] : cert.combination) ctx.report["certificate"].push_back({label, y.to_string()});
        ctx.report["certificate_value"] = cert.value.to_string();
        ctx.report["verified"] = cert.verified;
        code = kFalse;
      }
    };
  });

  // gauge
  std::string s_ref;
  bool use_inverse = false;
  auto* gauge = app.add_subcommand("gauge", "apply a gauge transformation and print the new family");
  gauge->add_option("alpha", alpha_ref)->required();
  gauge->add_option("S", s_ref)->required();
  gauge->add_flag("--inverse", use_inverse, "apply S^-1 instead of S");
  gauge->callback([&] {
    action = [&] {
      auto doc = load_zcr(alpha_ref);
      SuperMatrix s = load_matrix(s_ref, doc.symbols, doc.family.system.get()).matrix;
      if (use_inverse) {
        auto inv = inverse(s);
        if (!inv) throw std::invalid_argument("S is not invertible over the coefficient ring");
        s = *inv;
      }
      ZCRDocument out = doc;
      out.family = gauge_transform(doc.family, s);
      out.meta = {{"provenance", "derived"}, {"derivation", std::string("gauge transform by ") + (use_inverse ? "S^-1" : "S")}};
      std::cout << format_zcr(out);
      ctx.report["command"] = "gauge";
      ctx.report["A"] = out.family.A.to_string();
      ctx.report["B"] = out.family.B.to_string();
    };
  });

  // integrate-q
  std::string q_ref;
  std::string at = "0";
  auto* integ = app.add_subcommand("integrate-q", "solve dS/dlam = Q S with S = 1 at the base point");
  integ->add_option("Q", q_ref)->required();
  integ->add_option("--at", at, "base point lam0")->capture_default_str();
  integ->add_option("--param", param, "parameter (default: lam)");
  integ->callback([&] {
    action = [&] {
      auto doc = load_matrix(q_ref);
      std::string name = param.empty() ? "lam" : param_name(param);
      Variable lam = Variable::parameter(name, false);
      for (const auto& p : doc.parameters) {
        if (p.name() == name) lam = p;
      }
      GradedPoly base = parse_expression(at, SymbolTable());
      if (!base.is_constant()) throw std::invalid_argument("--at must be a number");
      SuperMatrix s = integrate_gauge(doc.matrix, lam, base.constant_term());
      MatrixDocument out{{lam}, s, {{"provenance", "derived"}, {"derivation", "integrate-q at " + at}}};
      std::cout << format_matrix(out);
      ctx.report["command"] = "integrate-q";
      ctx.report["S"] = s.to_string();
    };
  });

  // cover build / check
  auto* cover = app.add_subcommand("cover", "coverings from matrix representations");
  cover->require_subcommand(1);
  std::string mu = "1";
  auto* build = cover->add_subcommand("build", "covering by projective substitution");
  build->add_option("system", system_ref)->required();
  build->add_option("alpha", alpha_ref)->required();
  build->add_option("--mu", mu, "projective scale")->capture_default_str();
  build->callback([&] {
    action = [&] {
      auto sys = load_system(system_ref);
      auto doc = load_zcr(alpha_ref);
      require_system(sys, doc.family.system);
      GradedPoly m = parse_expression(mu, SymbolTable());
      if (!m.is_constant() || m.is_zero()) throw std::invalid_argument("--mu must be a nonzero number");
      auto chart = ProjectiveChart::standard(doc.family.A.signature(), m.constant_term());
      Covering c = covering_from_zcr(doc.family, chart);
      CoveringDocument out{system_ref, doc.parameters, doc.family.parameter, std::make_shared<const Covering>(c),
                           {}, {{"provenance", "derived"}, {"derivation", "projective substitution, mu = " + mu}}};
      std::cout << format_covering(out);
      ctx.report["command"] = "cover build";
      for (const auto& v : c.nonlocals()) {
        ctx.report["flows"][v.label()] = {{"x", c.flow(v).x.to_string()}, {"t", c.flow(v).t.to_string()}};
      }
    };
  });
  std::string cov_ref;
  auto* ccheck = cover->add_subcommand("check", "flatness D~_x(v_t) = D~_t(v_x)");
  ccheck->add_option("covering", cov_ref)->required();
  ccheck->callback([&] {
    action = [&] {
      auto doc = load_covering(cov_ref);
      auto r = flatness_residual(*doc.covering);
      bool ok = true;
      ctx.report["command"] = "cover check";
      for (const auto& [v, p] : r) {
        ok = ok && p.is_zero();
        std::cout << v.label() << ": " << (p.is_zero() ? "flat" : "nonzero " + p.to_string()) << "\n";
        ctx.report["residual"][v.label()] = p.to_string();
      }
      ctx.report["flat"] = ok;
      if (!ok) code = kFalse;
    };
  });

  // fn check / complete
  auto* fn = app.add_subcommand("fn", "structure equation for a parametric family of coverings");
  fn->require_subcommand(1);
  std::string shadow_ref;
  auto* fcheck = fn->add_subcommand("check", "residual of the structure equation for a shadow");
  fcheck->add_option("covering", cov_ref)->required();
  fcheck->add_option("shadow", shadow_ref)->required();
  fcheck->add_option("--param", param, "family parameter (default: the declared family)");
  fcheck->callback([&] {
    action = [&] {
      auto cov = load_covering(cov_ref);
      auto shadow = load_shadow(shadow_ref, cov);
      Variable p = param.empty() ? cov.family.value() : find_parameter(cov.parameters, param);
      auto r = fn_structure_residual(*cov.covering, p, verticalize(shadow.field, *cov.covering), shadow.rate);
      bool ok = std::all_of(r.begin(), r.end(), [](const auto& kv) { return kv.second.is_zero(); });
      std::cout << (ok ? "structure residual: zero\n" : "structure residual: nonzero\n" + residual_text(r));
      ctx.report["command"] = "fn check";
      ctx.report["residual_zero"] = ok;
      if (auto prov = meta_value(shadow.meta, "provenance")) ctx.report["provenance"] = *prov;
      if (!ok) code = kFalse;
    };
  });
  std::string rate = "1";
  CompletionAnsatz cans;
  std::string cwindow = "-3:3";
  auto* fcomp = fn->add_subcommand("complete", "complete a partially known shadow and print the result");
  fcomp->add_option("covering", cov_ref)->required();
  fcomp->add_option("seed", shadow_ref)->required();
  fcomp->add_option("--param", param, "family parameter (default: the declared family)");
  fcomp->add_option("--rate", rate, "d(param)/d(lambda)")->capture_default_str();
  fcomp->add_option("--nonlocal-degree", cans.nonlocal_degree)->capture_default_str();
  fcomp->add_option("--jet-order", cans.jet_order)->capture_default_str();
  fcomp->add_option("--jet-degree", cans.jet_degree)->capture_default_str();
  fcomp->add_option("--laurent", cwindow, "exponent window lo:hi")->capture_default_str();
  fcomp->callback([&] {
    action = [&] {
      auto colon = cwindow.find(':');
      if (colon == std::string::npos) throw std::invalid_argument("--laurent expects lo:hi");
      cans.exponent_min = std::stoi(cwindow.substr(0, colon));
      cans.exponent_max = std::stoi(cwindow.substr(colon + 1));
      auto cov = load_covering(cov_ref);
      auto seed = load_shadow(shadow_ref, cov);
      Variable p = param.empty() ? cov.family.value() : find_parameter(cov.parameters, param);
      GradedPoly r = parse_expression(rate, cov.symbols);
      auto done = complete_shadow(*cov.covering, p, r, verticalize(seed.field, *cov.covering),
                                  completion_candidates(*cov.covering, p, cans));
      ctx.report["command"] = "fn complete";
      ctx.report["ansatz"] = cans.describe(p);
      ctx.report["found"] = done.found;
      if (!done.found) {
        std::cout << "no completion within " << cans.describe(p) << " at rate " << r.to_string() << "\n";
        code = kFalse;
        return;
      }
      ShadowDocument out = seed;
      for (const auto& [v, term] : done.added) out.field.phi[v] += term;
      out.rate = r;
      std::string added;
      for (const auto& [v, term] : done.added) added += (added.empty() ? "" : ", ") + v.label() + ": " + term.to_string();
      out.meta = {{"provenance", "derived"},
                  {"ansatz", cans.describe(p)},
                  {"added", added.empty() ? "none" : added},
                  {"free directions", std::to_string(done.free_directions)}};
      out.covering_ref = seed.covering_ref;
      std::cout << format_shadow(out, cov);
      ctx.report["added"] = added;
    };
  });

  // lemma check
  std::string gamma_ref;
  int random_count = 0;
  unsigned seed_value = 1;
  auto* lemma = app.add_subcommand("lemma", "compatibility of the two differentials");
  lemma->require_subcommand(1);
  auto* lcheck = lemma->add_subcommand("check", "compare both paths of the diagram for gamma");
  lcheck->add_option("system", system_ref)->required();
  lcheck->add_option("alpha", alpha_ref)->required();
  lcheck->add_option("gamma", gamma_ref, "gamma matrix file")->required();
  lcheck->add_option("--random", random_count, "additionally test this many random sparse even gammas");
  lcheck->add_option("--seed", seed_value)->capture_default_str();
  lcheck->callback([&] {
    action = [&] {
      auto sys = load_system(system_ref);
      auto doc = load_zcr(alpha_ref);
      require_system(sys, doc.family.system);
      SuperMatrix g = load_matrix(gamma_ref, doc.symbols, sys.get()).matrix;
      auto chart = ProjectiveChart::standard(doc.family.A.signature());
      bool ok = diagram_check(doc.family, g, chart).commutes;
      std::cout << "gamma from file: " << (ok ? "commutes" : "does not commute") << "\n";
      std::mt19937 rng(seed_value);
      int passed = 0;
      for (int k = 0; k < random_count; ++k) {
        passed += diagram_check(doc.family, random_even_gamma(doc.family.A.signature(), rng), chart).commutes;
      }
      if (random_count > 0) std::cout << "random gammas: " << passed << "/" << random_count << " commute\n";
      ctx.report["command"] = "lemma check";
      ctx.report["commutes"] = ok;
      ctx.report["random"] = {{"count", random_count}, {"passed", passed}};
      if (!ok || passed != random_count) code = kFalse;
    };
  });

  // examples
  auto* ex = app.add_subcommand("examples", "built-in example registry");
  ex->require_subcommand(1);
  auto* exlist = ex->add_subcommand("list", "list registry keys");
  exlist->callback([&] {
    action = [&] {
      for (const auto& e : example_registry()) std::cout << e.key << "  " << e.title << "\n";
    };
  });
  std::string key;
  auto* exrun = ex->add_subcommand("run", "run the pipeline of one example");
  exrun->add_option("key", key)->required();
  exrun->callback([&] {
    action = [&] {
      ExampleReport rep = run_example(key);
      std::cout << rep.text();
      ctx.report = rep.to_json();
      if (!rep.passed()) code = kFalse;
    };
  });

  // expand-superfield
  std::string a_value = "4";
  auto* expand = app.add_subcommand("expand-superfield", "component form of the N=2 superfield equation");
  expand->add_option("--a", a_value, "a number or a parameter name")->capture_default_str();
  expand->callback([&] {
    action = [&] {
      SymbolTable symbols;
      bool symbolic = !a_value.empty() && std::isalpha(static_cast<unsigned char>(a_value[0])) && a_value != "i";
      if (symbolic) symbols.declare(Variable::parameter(a_value, false));
      GradedPoly a = parse_expression(a_value, symbols);
      auto sys = expand_superfield({a}, symbolic ? "skdv.a" : "skdv.a" + a_value);
      std::cout << format_system(sys);
      ctx.report["command"] = "expand-superfield";
      for (const auto& [u, f] : sys.rhs()) ctx.report["rhs"][u.label()] = f.to_string();
    };
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? kOk : kError;
  }
  try {
    if (action) action();
    ctx.write();
  } catch (const std::out_of_range& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kError;
  }
  return code;
}
