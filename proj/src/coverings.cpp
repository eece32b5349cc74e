#include "gzcr/coverings.hpp"

namespace gzcr {

ProjectiveChart ProjectiveChart::standard(const BlockSignature& sig, GaussianRational mu) {
  if (mu.is_zero()) throw std::invalid_argument("mu must be nonzero");
  ProjectiveChart c;
  c.mu = std::move(mu);
  int k0 = sig.even - 1;
  for (int k = 1; k <= k0; ++k) {
    c.w.push_back(Variable::nonlocal(k0 == 1 ? "w" : "w" + std::to_string(k), Parity::Even));
  }
  for (int k = 1; k <= sig.odd; ++k) {
    c.f.push_back(Variable::nonlocal(sig.odd == 1 ? "f" : "f" + std::to_string(k), Parity::Odd));
  }
  return c;
}

std::vector<Variable> ProjectiveChart::nonlocals() const {
  std::vector<Variable> out = w;
  out.insert(out.end(), f.begin(), f.end());
  return out;
}

GradedPoly RepVectorField::component(const Variable& v) const {
  auto it = components.find(v);
  return it == components.end() ? GradedPoly() : it->second;
}

GradedPoly RepVectorField::apply(const GradedPoly& p) const {
  return apply_derivation(p, [&](const Variable& v) -> std::optional<GradedPoly> {
    auto it = components.find(v);
    if (it == components.end()) return std::nullopt;
    return it->second;
  });
}

bool RepVectorField::is_zero() const {
  for (const auto& [v, c] : components) {
    if (!c.is_zero()) return false;
  }
  return true;
}

RepVectorField commutator(const RepVectorField& x, const RepVectorField& y) {
  auto field_parity = [](const RepVectorField& f) -> std::optional<Parity> {
    std::optional<Parity> p;
    for (const auto& [v, c] : f.components) {
      if (c.is_zero()) continue;
      auto q = c.parity_if_homogeneous();
      if (!q) return std::nullopt;
      Parity total = *q + v.parity();
      if (p && *p != total) return std::nullopt;
      p = total;
    }
    return p.value_or(Parity::Even);
  };
  auto px = field_parity(x);
  auto py = field_parity(y);
  if (!px || !py) throw ParityError("commutator of non-homogeneous vector fields");
  int s = sign_of(*px, *py);
  RepVectorField out;
  std::set<Variable> vars;
  for (const auto& [v, c] : x.components) vars.insert(v);
  for (const auto& [v, c] : y.components) vars.insert(v);
  for (const auto& v : vars) {
    GradedPoly c = x.apply(y.component(v));
    GradedPoly d = y.apply(x.component(v));
    c = s < 0 ? c + d : c - d;
    if (!c.is_zero()) out.components[v] = c;
  }
  return out;
}

RepVectorField projective_rep(const SuperMatrix& g, const ProjectiveChart& chart) {
  const BlockSignature sig = g.signature();
  if (static_cast<int>(chart.w.size()) != sig.even - 1 || static_cast<int>(chart.f.size()) != sig.odd) {
    throw std::invalid_argument("chart does not match signature " + sig.to_string());
  }
  const GradedPoly mu(chart.mu);
  const GradedPoly mu_inv(chart.mu.inverse());
  // homogeneous coordinates on the section v_0 = 1
  std::vector<GradedPoly> v(static_cast<std::size_t>(sig.size()));
  v[0] = 1;
  auto coords = chart.nonlocals();
  for (std::size_t k = 0; k < coords.size(); ++k) v[k + 1] = mu_inv * GradedPoly::variable(coords[k]);

  auto image = [&](int j) {  // (v g)_j
    GradedPoly s;
    for (int i = 0; i < sig.size(); ++i) {
      const GradedPoly& gij = g.at(i, j);
      if (gij.is_zero() || v[static_cast<std::size_t>(i)].is_zero()) continue;
      s += v[static_cast<std::size_t>(i)] * gij;
    }
    return s;
  };
  GradedPoly v0 = image(0);
  RepVectorField out;
  for (std::size_t k = 0; k < coords.size(); ++k) {
    // (v g)_0 on the left: the order matters for odd g
    GradedPoly c = mu * image(static_cast<int>(k + 1)) - v0 * GradedPoly::variable(coords[k]);
    if (!c.is_zero()) out.components[coords[k]] = c;
  }
  return out;
}

Covering::Covering(std::string name, SystemPtr system, std::vector<Variable> nonlocals,
                   std::vector<Variable> parameters, std::map<Variable, Flow> flows)
    : name_(std::move(name)),
      system_(std::move(system)),
      nonlocals_(std::move(nonlocals)),
      parameters_(std::move(parameters)),
      flows_(std::move(flows)) {
  if (!system_) throw std::invalid_argument("covering without a system");
  for (const auto& v : nonlocals_) {
    if (!v.is_nonlocal()) throw std::invalid_argument(v.label() + " is not a nonlocal variable");
    auto it = flows_.find(v);
    if (it == flows_.end()) throw std::invalid_argument("missing flows for " + v.label());
    for (const GradedPoly* p : {&it->second.x, &it->second.t}) {
      auto q = p->parity_if_homogeneous();
      if (!p->is_zero() && (!q || *q != v.parity())) throw ParityError("flow of " + v.label() + " has wrong parity");
      for (const auto& u : p->variables()) {
        bool known = system_->space().owns(u) || u.is_parameter() ||
                     std::find(nonlocals_.begin(), nonlocals_.end(), u) != nonlocals_.end();
        if (!known) throw UnknownVariable("variable " + u.label() + " unknown to covering " + name_);
      }
    }
  }
  if (flows_.size() != nonlocals_.size()) throw std::invalid_argument("flows for undeclared nonlocal variables");
}

const Covering::Flow& Covering::flow(const Variable& v) const {
  auto it = flows_.find(v);
  if (it == flows_.end()) throw UnknownVariable("no flow for " + v.label());
  return it->second;
}

GradedPoly Covering::dx(const GradedPoly& p) const {
  GradedPoly r = total_x(*system_, p, NonlocalPolicy::Constant);
  for (const auto& v : p.variables()) {
    if (v.is_nonlocal()) r += flow(v).x * partial(p, v);
  }
  return r;
}

GradedPoly Covering::dt(const GradedPoly& p) const {
  GradedPoly r = total_t(*system_, p, NonlocalPolicy::Constant);
  for (const auto& v : p.variables()) {
    if (v.is_nonlocal()) r += flow(v).t * partial(p, v);
  }
  return r;
}

Covering covering_from_zcr(const ZCRFamily& z, const ProjectiveChart& chart, const std::string& name) {
  RepVectorField xa = projective_rep(z.A, chart);
  RepVectorField xb = projective_rep(z.B, chart);
  std::map<Variable, Covering::Flow> flows;
  for (const auto& v : chart.nonlocals()) flows[v] = {-xa.component(v), -xb.component(v)};
  std::vector<Variable> params;
  for (const auto& m : {z.A, z.B}) {
    for (int i = 0; i < m.size(); ++i) {
      for (int j = 0; j < m.size(); ++j) {
        for (const auto& u : m.at(i, j).variables()) {
          if (u.is_parameter() && std::find(params.begin(), params.end(), u) == params.end()) params.push_back(u);
        }
      }
    }
  }
  return Covering(name.empty() ? z.system->name() + ".cover" : name, z.system, chart.nonlocals(), params, flows);
}

std::map<Variable, GradedPoly> flatness_residual(const Covering& c) {
  std::map<Variable, GradedPoly> out;
  for (const auto& v : c.nonlocals()) {
    const auto& f = c.flow(v);
    out[v] = c.dx(f.t) - c.dt(f.x);
  }
  return out;
}

bool ShadowField::is_zero() const {
  for (const auto& m : {&phi, &omega}) {
    for (const auto& [v, c] : *m) {
      if (!c.is_zero()) return false;
    }
  }
  return true;
}

ShadowField verticalize(const GeneralField& field, const Covering& c) {
  ShadowField out;
  for (const auto& v : c.nonlocals()) {
    auto it = field.phi.find(v);
    GradedPoly p = it == field.phi.end() ? GradedPoly() : it->second;
    p -= field.a * c.flow(v).x + field.b * c.flow(v).t;
    if (!p.is_zero()) out.phi[v] = p;
  }
  const EvolutionarySystem& sys = *c.system();
  for (const auto& u : sys.space().dependents) {
    auto it = field.omega.find(u);
    GradedPoly o = it == field.omega.end() ? GradedPoly() : it->second;
    o -= field.a * GradedPoly::variable(u.prolonged()) + field.b * sys.rhs(u);
    if (!o.is_zero()) out.omega[u] = o;
  }
  for (const auto& [u, o] : field.omega) {
    if (!sys.space().has_dependent(u)) throw UnknownVariable("omega for unknown dependent " + u.label());
  }
  return out;
}

std::map<Variable, StructureResidual> fn_structure_residual(const Covering& c, const Variable& param,
                                                            const ShadowField& x, const GradedPoly& rate) {
  for (const auto& [v, p] : x.phi) {
    if (std::find(c.nonlocals().begin(), c.nonlocals().end(), v) == c.nonlocals().end()) {
      throw UnknownVariable("phi component along " + v.label() + " which is not a nonlocal of the covering");
    }
  }
  std::map<Variable, std::vector<GradedPoly>> seeds;
  for (const auto& [u, o] : x.omega) seeds[u] = {o};
  auto prolonged_seed = [&](const Variable& jet) -> std::optional<GradedPoly> {
    auto it = seeds.find(jet.base());
    if (it == seeds.end()) return std::nullopt;
    auto& chain = it->second;
    while (static_cast<int>(chain.size()) <= jet.order()) chain.push_back(c.dx(chain.back()));
    return chain[static_cast<std::size_t>(jet.order())];
  };
  auto apply_x = [&](const GradedPoly& p) {
    return apply_derivation(p, [&](const Variable& v) -> std::optional<GradedPoly> {
      if (v.is_nonlocal()) {
        auto it = x.phi.find(v);
        if (it == x.phi.end()) return std::nullopt;
        return it->second;
      }
      if (v.is_jet()) return prolonged_seed(v);
      return std::nullopt;
    });
  };

  std::map<Variable, StructureResidual> out;
  for (const auto& v : c.nonlocals()) {
    const auto& f = c.flow(v);
    auto pit = x.phi.find(v);
    GradedPoly phi = pit == x.phi.end() ? GradedPoly() : pit->second;
    StructureResidual r;
    r.x = c.dx(phi) - apply_x(f.x);
    r.t = c.dt(phi) - apply_x(f.t);
    if (!rate.is_zero()) {
      r.x += rate * partial(f.x, param);
      r.t += rate * partial(f.t, param);
    }
    out[v] = std::move(r);
  }
  return out;
}

ShadowField shadow_from_gmatrix(const SuperMatrix& q, const ProjectiveChart& chart) {
  if (q.parity() != Parity::Even) throw ParityError("Q must be even");
  ShadowField s;
  for (const auto& [v, c] : projective_rep(q, chart).components) s.phi[v] = c;
  return s;
}

DiagramVerdict diagram_check(const ZCRFamily& z, const SuperMatrix& gamma, const ProjectiveChart& chart) {
  if (!(gamma.signature() == z.A.signature())) throw std::invalid_argument("gamma signature mismatch");
  if (gamma.parity() != Parity::Even) throw ParityError("gamma must be even");
  const EvolutionarySystem& sys = *z.system;

  SuperMatrix mx = gamma.map([&](const GradedPoly& e) { return total_x(sys, e); }) - supercommutator(z.A, gamma);
  SuperMatrix mt = gamma.map([&](const GradedPoly& e) { return total_t(sys, e); }) - supercommutator(z.B, gamma);
  RepVectorField top_x = projective_rep(mx, chart);
  RepVectorField top_t = projective_rep(mt, chart);

  Covering cov = covering_from_zcr(z, chart);
  RepVectorField xg = projective_rep(gamma, chart);

  DiagramVerdict verdict;
  verdict.commutes = true;
  for (const auto& v : chart.nonlocals()) {
    const auto& f = cov.flow(v);
    GradedPoly bx = cov.dx(xg.component(v)) - xg.apply(f.x);
    GradedPoly bt = cov.dt(xg.component(v)) - xg.apply(f.t);
    verdict.top[v] = {top_x.component(v), top_t.component(v)};
    verdict.bottom[v] = {bx, bt};
    if (!(bx == top_x.component(v)) || !(bt == top_t.component(v))) verdict.commutes = false;
  }
  return verdict;
}

ShadowCompletion complete_shadow(const Covering& c, const Variable& param, const GradedPoly& rate,
                                 const ShadowField& seed, const std::map<Variable, std::vector<Monomial>>& candidates) {
  const auto& nl = c.nonlocals();
  auto flatten = [&](const std::map<Variable, StructureResidual>& r) {
    std::vector<GradedPoly> out;
    for (const auto& v : nl) {
      out.push_back(r.at(v).x);
      out.push_back(r.at(v).t);
    }
    return out;
  };
  std::vector<std::pair<Variable, Monomial>> unknowns;
  for (const auto& [v, ms] : candidates) {
    for (const auto& m : ms) {
      if (m.parity() != v.parity()) throw ParityError("candidate " + m.to_string() + " has wrong parity for " + v.label());
      unknowns.emplace_back(v, m);
    }
  }
  AffineAssembler assembler(2 * nl.size(), unknowns.size());
  assembler.set_constant(flatten(fn_structure_residual(c, param, seed, rate)));
  for (std::size_t k = 0; k < unknowns.size(); ++k) {
    ShadowField one;
    one.phi[unknowns[k].first] = GradedPoly::term(unknowns[k].second, 1);
    assembler.add_column(k, flatten(fn_structure_residual(c, param, one, GradedPoly())));
  }
  auto [system, keys] = assembler.build();
  auto result = solve(system);

  ShadowCompletion out;
  out.unknowns = unknowns.size();
  out.equations = system.equations().size();
  if (std::holds_alternative<Inconsistency>(result)) return out;
  const auto& sol = std::get<LinearSolution>(result);
  out.found = true;
  out.free_directions = sol.kernel.size();
  out.field = seed;
  for (std::size_t k = 0; k < unknowns.size(); ++k) {
    if (sol.particular[k].is_zero()) continue;
    GradedPoly term = GradedPoly::term(unknowns[k].second, sol.particular[k]);
    out.field.phi[unknowns[k].first] += term;
    out.added.emplace_back(unknowns[k].first, term);
  }
  // independent re-check
  for (const auto& [v, r] : fn_structure_residual(c, param, out.field, rate)) {
    if (!r.is_zero()) throw std::logic_error("shadow completion failed re-verification");
  }
  return out;
}

}  // namespace gzcr
