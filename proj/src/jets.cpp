#include "gzcr/jets.hpp"

#include <algorithm>

namespace gzcr {

bool JetSpace::has_dependent(const Variable& base) const {
  return std::find(dependents.begin(), dependents.end(), base) != dependents.end();
}

bool JetSpace::owns(const Variable& v) const {
  if (v == x || v == t) return true;
  return v.is_jet() && has_dependent(v.base());
}

EvolutionarySystem::EvolutionarySystem(std::string name, JetSpace space, std::vector<Variable> parameters,
                                       std::map<Variable, GradedPoly> rhs)
    : name_(std::move(name)), space_(std::move(space)), parameters_(std::move(parameters)), rhs_(std::move(rhs)) {
  for (const auto& d : space_.dependents) {
    if (!d.is_jet() || d.order() != 0) throw std::invalid_argument("dependent must be an order-0 jet: " + d.label());
    if (!rhs_.count(d)) throw std::invalid_argument("missing equation for " + d.label());
  }
  for (const auto& [dep, f] : rhs_) {
    if (!space_.has_dependent(dep)) throw std::invalid_argument("equation for undeclared dependent " + dep.label());
    auto p = f.parity_if_homogeneous();
    if (!f.is_zero() && (!p || *p != dep.parity())) {
      throw ParityError("right-hand side of " + dep.label() + "_t has wrong parity");
    }
    for (const auto& v : f.variables()) {
      if (space_.owns(v)) continue;
      if (v.is_parameter() && std::find(parameters_.begin(), parameters_.end(), v) != parameters_.end()) continue;
      if (v.kind() == VarKind::OddIndependent) {
        throw std::invalid_argument("odd independent " + v.label() + " in equation coefficients");
      }
      throw UnknownVariable("variable " + v.label() + " not declared in system " + name_);
    }
  }
}

const GradedPoly& EvolutionarySystem::rhs(const Variable& dependent) const {
  auto it = rhs_.find(dependent);
  if (it == rhs_.end()) throw UnknownVariable("no equation for " + dependent.label());
  return it->second;
}

namespace {

// Parameters (including family parameters foreign to the system) and θ are
// constants for the total derivatives.
void check_variable(const Variable& v, const JetSpace* space, NonlocalPolicy policy) {
  if (v.is_parameter() || v.kind() == VarKind::OddIndependent) return;
  if (v.is_nonlocal()) {
    if (policy == NonlocalPolicy::Reject) {
      throw UnknownVariable("nonlocal variable " + v.label() + " needs a covering");
    }
    return;
  }
  if (space && !space->owns(v)) throw UnknownVariable("variable " + v.label() + " not in jet space");
}

}  // namespace

GradedPoly free_total_x(const GradedPoly& f, NonlocalPolicy policy) {
  static const Variable x = Variable::independent("x");
  return apply_derivation(f, [&](const Variable& v) -> std::optional<GradedPoly> {
    check_variable(v, nullptr, policy);
    if (v == x) return GradedPoly(1);
    if (v.is_jet()) return GradedPoly::variable(v.prolonged());
    return std::nullopt;
  });
}

GradedPoly total_x(const EvolutionarySystem& system, const GradedPoly& f, NonlocalPolicy policy) {
  const JetSpace& s = system.space();
  return apply_derivation(f, [&](const Variable& v) -> std::optional<GradedPoly> {
    check_variable(v, &s, policy);
    if (v == s.x) return GradedPoly(1);
    if (v.is_jet()) return GradedPoly::variable(v.prolonged());
    return std::nullopt;
  });
}

GradedPoly total_x_power(const EvolutionarySystem& system, const GradedPoly& f, int n, NonlocalPolicy policy) {
  GradedPoly r = f;
  for (int k = 0; k < n; ++k) r = total_x(system, r, policy);
  return r;
}

GradedPoly total_t(const EvolutionarySystem& system, const GradedPoly& f, NonlocalPolicy policy) {
  const JetSpace& s = system.space();
  // prolongations D_x^k F computed once per call
  std::map<Variable, std::vector<GradedPoly>> prolonged;
  auto flow = [&](const Variable& v) -> const GradedPoly& {
    auto& chain = prolonged[v.base()];
    if (chain.empty()) chain.push_back(system.rhs(v.base()));
    while (static_cast<int>(chain.size()) <= v.order()) chain.push_back(total_x(system, chain.back()));
    return chain[static_cast<std::size_t>(v.order())];
  };
  return apply_derivation(f, [&](const Variable& v) -> std::optional<GradedPoly> {
    check_variable(v, &s, policy);
    if (v == s.t) return GradedPoly(1);
    if (v.is_jet()) return flow(v);
    return std::nullopt;
  });
}

EvolutionarySystem expand_superfield(const SuperfieldEquation& eq, const std::string& name) {
  const Variable th1 = Variable::odd_independent("th1");
  const Variable th2 = Variable::odd_independent("th2");
  const Variable u0 = Variable::jet("u0", Parity::Even);
  const Variable u1 = Variable::jet("u1", Parity::Odd);
  const Variable u2 = Variable::jet("u2", Parity::Odd);
  const Variable u12 = Variable::jet("u12", Parity::Even);

  std::vector<Variable> params;
  for (const auto& v : eq.a.variables()) {
    if (!v.is_parameter() || v.invertible()) throw std::invalid_argument("symbolic a must be a plain parameter");
    params.push_back(v);
  }

  auto V = [](const Variable& v) { return GradedPoly::variable(v); };
  auto Dx = [](const GradedPoly& p) { return free_total_x(p); };
  auto D = [&](const Variable& th, const GradedPoly& p) { return odd_partial(p, th) + V(th) * Dx(p); };
  auto D12 = [&](const GradedPoly& p) { return D(th1, D(th2, p)); };

  GradedPoly u = V(u0) + V(th1) * V(u1) + V(th2) * V(u2) + V(th1) * V(th2) * V(u12);
  GradedPoly half_am1 = (eq.a - GradedPoly(1)) * GaussianRational(mpq_class(1, 2));
  GradedPoly rhs = -Dx(Dx(Dx(u))) + GradedPoly(3) * Dx(u * D12(u)) + half_am1 * Dx(D12(u * u)) +
                   GradedPoly(3) * eq.a * u * u * Dx(u);

  std::map<Variable, GradedPoly> zero_th{{th1, GradedPoly()}, {th2, GradedPoly()}};
  std::map<Variable, GradedPoly> comps;
  comps[u0] = substitute(rhs, zero_th);
  comps[u1] = substitute(odd_partial(rhs, th1), zero_th);
  comps[u2] = substitute(odd_partial(rhs, th2), zero_th);
  comps[u12] = substitute(odd_partial(odd_partial(rhs, th1), th2), zero_th);

  JetSpace space;
  space.dependents = {u0, u1, u2, u12};
  return EvolutionarySystem(name, space, params, comps);
}

EvolutionarySystem bosonic_limit(const EvolutionarySystem& system, const std::string& name) {
  JetSpace space = system.space();
  space.dependents.clear();
  std::map<Variable, GradedPoly> rhs;
  for (const auto& d : system.space().dependents) {
    if (d.is_odd()) continue;
    space.dependents.push_back(d);
    GradedPoly kept;
    for (const auto& [m, c] : system.rhs(d).terms()) {
      bool odd_jet = std::any_of(m.odds().begin(), m.odds().end(), [](const Variable& v) { return v.is_jet(); });
      if (!odd_jet) kept += GradedPoly::term(m, c);
    }
    rhs[d] = kept;
  }
  return EvolutionarySystem(name.empty() ? system.name() + ".bosonic" : name, space, system.parameters(), rhs);
}

}  // namespace gzcr
