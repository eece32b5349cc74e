#pragma once

// Random generators and property checks shared by the unit tests and the
// acceptance binary.

#include <algorithm>
#include <functional>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "gzcr/examples.hpp"

namespace gzcr::testing {

struct PropertyResult {
  std::string name;
  int cases = 0;
  int failures = 0;
  std::string first_failure;

  bool ok() const { return cases > 0 && failures == 0; }
  std::string summary() const {
    std::ostringstream os;
    os << name << ": " << cases - failures << "/" << cases;
    if (!first_failure.empty()) os << " (first failure: " << first_failure << ")";
    return os.str();
  }
};

class Gen {
 public:
  explicit Gen(unsigned seed) : rng_(seed) {}

  int uniform(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }
  bool coin(int one_in = 2) { return uniform(1, one_in) == 1; }

  GaussianRational coefficient() {
    int re = uniform(-3, 3);
    if (re == 0) re = 1;
    int im = coin(3) ? uniform(-1, 1) : 0;
    return GaussianRational(mpq_class(re, uniform(1, 2)), mpq_class(im));
  }

  // Monomial of the requested parity drawn from the pools; the product is
  // formed through GradedPoly so that the Koszul sign is included.
  GradedPoly term(Parity parity, const std::vector<Variable>& evens, const std::vector<Variable>& odds,
                  int max_even_factors = 2) {
    GradedPoly t(coefficient());
    int n_even = evens.empty() ? 0 : uniform(0, max_even_factors);
    for (int k = 0; k < n_even; ++k) {
      const Variable& v = evens[static_cast<std::size_t>(uniform(0, static_cast<int>(evens.size()) - 1))];
      int e = v.invertible() ? uniform(-2, 2) : uniform(1, 2);
      if (e != 0) t = t * GradedPoly::variable(v, e);
    }
    int want = parity == Parity::Odd ? 1 : 0;
    int max_odd = std::min<int>(3, static_cast<int>(odds.size()));
    std::vector<int> counts;
    for (int c = want; c <= max_odd; c += 2) counts.push_back(c);
    if (counts.empty()) return parity == Parity::Odd ? GradedPoly() : t;
    int n_odd = counts[static_cast<std::size_t>(uniform(0, static_cast<int>(counts.size()) - 1))];
    std::vector<Variable> pool = odds;
    std::shuffle(pool.begin(), pool.end(), rng_);
    for (int k = 0; k < n_odd; ++k) t = t * GradedPoly::variable(pool[static_cast<std::size_t>(k)]);
    return t;
  }

  GradedPoly poly(Parity parity, const std::vector<Variable>& evens, const std::vector<Variable>& odds,
                  int max_terms = 3) {
    GradedPoly p;
    int n = uniform(1, max_terms);
    for (int k = 0; k < n; ++k) p += term(parity, evens, odds);
    return p;
  }

  SuperMatrix matrix(const BlockSignature& sig, Parity parity, const std::vector<Variable>& evens,
                     const std::vector<Variable>& odds, int max_terms = 2) {
    SuperMatrix m(sig);
    for (int i = 0; i < sig.size(); ++i) {
      for (int j = 0; j < sig.size(); ++j) {
        if (coin()) continue;
        m.at(i, j) = poly(parity + m.position_parity(i, j), evens, odds, max_terms);
      }
    }
    return m;
  }

  Parity parity() { return coin() ? Parity::Even : Parity::Odd; }
  std::mt19937& engine() { return rng_; }

 private:
  std::mt19937 rng_;
};

// Jet coordinates of `system` up to `order`, split by parity.
inline std::pair<std::vector<Variable>, std::vector<Variable>> jet_pools(const EvolutionarySystem& system, int order) {
  std::vector<Variable> evens;
  std::vector<Variable> odds;
  for (const auto& d : system.space().dependents) {
    for (int k = 0; k <= order; ++k) (d.is_odd() ? odds : evens).push_back(d.prolonged(k));
  }
  return {evens, odds};
}

inline Variable eps() { return Variable::parameter("eps", true); }
inline Variable theta(int k) { return Variable::odd_independent("th" + std::to_string(k)); }

struct Pools {
  std::vector<Variable> evens;
  std::vector<Variable> odds;
};

// Scalars: skdv jets, eps and the Grassmann generators th1, th2.
inline Pools scalar_pools() {
  auto sys = load_system("skdv.a4");
  auto [e, o] = jet_pools(*sys, 1);
  e.push_back(eps());
  o.push_back(theta(1));
  o.push_back(theta(2));
  return {e, o};
}

inline PropertyResult run_property(const std::string& name, int cases, unsigned seed,
                                   const std::function<std::string(Gen&)>& body) {
  PropertyResult r{name, 0, 0, ""};
  Gen gen(seed);
  for (int k = 0; k < cases; ++k) {
    ++r.cases;
    std::string failure;
    try {
      failure = body(gen);
    } catch (const std::exception& e) {
      failure = std::string("exception: ") + e.what();
    }
    if (!failure.empty()) {
      ++r.failures;
      if (r.first_failure.empty()) r.first_failure = "case " + std::to_string(k) + ": " + failure;
    }
  }
  return r;
}

inline PropertyResult koszul_symmetry(int cases, unsigned seed = 11) {
  Pools p = scalar_pools();
  return run_property("Koszul sign symmetry", cases, seed, [&](Gen& g) -> std::string {
    Parity pa = g.parity();
    Parity pb = g.parity();
    GradedPoly a = g.poly(pa, p.evens, p.odds);
    GradedPoly b = g.poly(pb, p.evens, p.odds);
    GradedPoly lhs = a * b;
    GradedPoly rhs = b * a;
    if (pa == Parity::Odd && pb == Parity::Odd) rhs = -rhs;
    return lhs == rhs ? "" : a.to_string() + " | " + b.to_string();
  });
}

inline PropertyResult odd_nilpotence(int cases, unsigned seed = 12) {
  Pools p = scalar_pools();
  return run_property("odd nilpotence", cases, seed, [&](Gen& g) -> std::string {
    const Variable& v = p.odds[static_cast<std::size_t>(g.uniform(0, static_cast<int>(p.odds.size()) - 1))];
    GradedPoly x = GradedPoly::variable(v);
    if (!(x * x).is_zero()) return "v*v for " + v.label();
    GradedPoly f = g.poly(Parity::Odd, p.evens, p.odds);
    return (f * f).is_zero() ? "" : "f*f for odd f = " + f.to_string();
  });
}

inline PropertyResult leibniz_odd(int cases, unsigned seed = 13) {
  Pools p = scalar_pools();
  return run_property("graded Leibniz, odd partial", cases, seed, [&](Gen& g) -> std::string {
    const Variable& v = p.odds[static_cast<std::size_t>(g.uniform(0, static_cast<int>(p.odds.size()) - 1))];
    Parity pf = g.parity();
    GradedPoly f = g.poly(pf, p.evens, p.odds);
    GradedPoly h = g.poly(g.parity(), p.evens, p.odds);
    GradedPoly lhs = odd_partial(f * h, v);
    GradedPoly rhs = odd_partial(f, v) * h + (pf == Parity::Odd ? -(f * odd_partial(h, v)) : f * odd_partial(h, v));
    return lhs == rhs ? "" : f.to_string() + " | " + h.to_string() + " along " + v.label();
  });
}

inline PropertyResult leibniz_even(int cases, unsigned seed = 14) {
  Pools p = scalar_pools();
  return run_property("Leibniz, even partial", cases, seed, [&](Gen& g) -> std::string {
    const Variable& v = p.evens[static_cast<std::size_t>(g.uniform(0, static_cast<int>(p.evens.size()) - 1))];
    GradedPoly f = g.poly(g.parity(), p.evens, p.odds);
    GradedPoly h = g.poly(g.parity(), p.evens, p.odds);
    GradedPoly lhs = even_partial(f * h, v);
    GradedPoly rhs = even_partial(f, v) * h + f * even_partial(h, v);
    return lhs == rhs ? "" : f.to_string() + " | " + h.to_string() + " along " + v.label();
  });
}

// Odd partials anticommute, even ones commute, mixed ones commute.
inline PropertyResult partial_commutation(int cases, unsigned seed = 15) {
  Pools p = scalar_pools();
  return run_property("partial derivative commutation relations", cases, seed, [&](Gen& g) -> std::string {
    auto pick = [&](const std::vector<Variable>& pool) {
      return pool[static_cast<std::size_t>(g.uniform(0, static_cast<int>(pool.size()) - 1))];
    };
    GradedPoly f = g.poly(g.parity(), p.evens, p.odds, 4) + g.poly(g.parity(), p.evens, p.odds, 4);
    Variable a = g.coin() ? pick(p.odds) : pick(p.evens);
    Variable b = g.coin() ? pick(p.odds) : pick(p.evens);
    GradedPoly ab = partial(partial(f, b), a);
    GradedPoly ba = partial(partial(f, a), b);
    bool ok = (a.is_odd() && b.is_odd()) ? ab == -ba : ab == ba;
    return ok ? "" : f.to_string() + " along " + a.label() + ", " + b.label();
  });
}

inline BlockSignature sl21() { return BlockSignature{2, 1}; }

inline Pools matrix_pools() {
  auto sys = load_system("skdv.a4");
  auto [e, o] = jet_pools(*sys, 1);
  return {e, o};
}

inline PropertyResult super_jacobi(int cases, unsigned seed = 16) {
  Pools p = matrix_pools();
  return run_property("super-Jacobi identity", cases, seed, [&](Gen& g) -> std::string {
    Parity pa = g.parity();
    Parity pb = g.parity();
    SuperMatrix a = g.matrix(sl21(), pa, p.evens, p.odds, 1);
    SuperMatrix b = g.matrix(sl21(), pb, p.evens, p.odds, 1);
    SuperMatrix c = g.matrix(sl21(), g.parity(), p.evens, p.odds, 1);
    SuperMatrix lhs = supercommutator(a, supercommutator(b, c));
    SuperMatrix rhs = supercommutator(supercommutator(a, b), c);
    SuperMatrix swapped = supercommutator(b, supercommutator(a, c));
    rhs = (pa == Parity::Odd && pb == Parity::Odd) ? rhs - swapped : rhs + swapped;
    return lhs == rhs ? "" : "A = " + a.to_string();
  });
}

inline PropertyResult supertrace_of_bracket(int cases, unsigned seed = 17) {
  Pools p = matrix_pools();
  return run_property("supertrace of a supercommutator vanishes", cases, seed, [&](Gen& g) -> std::string {
    SuperMatrix a = g.matrix(sl21(), g.parity(), p.evens, p.odds);
    SuperMatrix b = g.matrix(sl21(), g.parity(), p.evens, p.odds);
    GradedPoly s = supercommutator(a, b).supertrace();
    return s.is_zero() ? "" : "str = " + s.to_string();
  });
}

inline PropertyResult dh_squared(int cases, unsigned seed = 18) {
  auto sys = load_system("skdv.a4");
  auto [e, o] = jet_pools(*sys, 2);
  e.push_back(eps());
  return run_property("horizontal differential squares to zero", cases, seed, [&](Gen& g) -> std::string {
    SuperMatrix m = g.matrix(sl21(), g.parity(), e, o);
    HorizontalForm d2 = dh_form(*sys, dh_form(*sys, HorizontalForm::zero_form(m)));
    return d2.is_zero() ? "" : "M = " + m.to_string();
  });
}

inline PropertyResult total_derivatives_commute(int cases, unsigned seed = 19) {
  std::vector<SystemPtr> systems = {load_system("skdv.a4"), load_system("kb3"), load_system("kdv"),
                                    load_system("skdv.a")};
  return run_property("total derivatives commute on the equation", cases, seed, [&](Gen& g) -> std::string {
    const auto& sys = systems[static_cast<std::size_t>(g.uniform(0, static_cast<int>(systems.size()) - 1))];
    auto [e, o] = jet_pools(*sys, 2);
    e.push_back(eps());
    e.push_back(Variable::independent("x"));
    GradedPoly f = g.poly(g.parity(), e, o);
    GradedPoly xt = total_x(*sys, total_t(*sys, f));
    GradedPoly tx = total_t(*sys, total_x(*sys, f));
    return xt == tx ? "" : sys->name() + ": " + f.to_string();
  });
}

// Even gauge matrix with a triangular invertible body.
inline SuperMatrix random_gauge(Gen& g, const Pools& p) {
  BlockSignature sig = sl21();
  SuperMatrix s(sig);
  for (int i = 0; i < sig.size(); ++i) {
    for (int j = 0; j < sig.size(); ++j) {
      if (i == j) {
        GradedPoly d(g.coefficient());
        if (g.coin(3)) d = d * GradedPoly::variable(eps(), g.coin() ? 1 : -1);
        s.at(i, j) = d;
      } else if (s.position_parity(i, j) == Parity::Odd) {
        if (g.coin()) s.at(i, j) = g.poly(Parity::Odd, p.evens, p.odds, 1);
      } else if (i < j && g.coin()) {
        s.at(i, j) = g.poly(Parity::Even, p.evens, p.odds, 2);
      }
    }
  }
  return s;
}

inline PropertyResult gauge_composition(int cases, unsigned seed = 20) {
  auto doc = load_zcr("builtin:zcr/removable_beta.zcr");
  auto sys = doc.family.system;
  auto [e, o] = jet_pools(*sys, 1);
  e.push_back(eps());
  Pools p{e, o};
  return run_property("gauge action composes", cases, seed, [&](Gen& g) -> std::string {
    SuperMatrix s = random_gauge(g, p);
    SuperMatrix t = random_gauge(g, p);
    ZCRFamily twice = gauge_transform(gauge_transform(doc.family, s), t);
    ZCRFamily once = gauge_transform(doc.family, t * s);
    return twice.A == once.A && twice.B == once.B ? "" : "S = " + s.to_string();
  });
}

inline PropertyResult projective_homomorphism(int cases, unsigned seed = 21) {
  Pools p = matrix_pools();
  ProjectiveChart chart = ProjectiveChart::standard(sl21());
  return run_property("projective representation is a homomorphism", cases, seed, [&](Gen& g) -> std::string {
    SuperMatrix a = g.matrix(sl21(), g.parity(), p.evens, p.odds, 1);
    SuperMatrix b = g.matrix(sl21(), g.parity(), p.evens, p.odds, 1);
    RepVectorField lhs = projective_rep(supercommutator(a, b), chart);
    RepVectorField rhs = commutator(projective_rep(a, chart), projective_rep(b, chart));
    for (const auto& v : chart.nonlocals()) {
      if (!(lhs.component(v) == rhs.component(v))) return "component " + v.label() + " for A = " + a.to_string();
    }
    return "";
  });
}

inline std::vector<PropertyResult> all_properties(int cases) {
  return {koszul_symmetry(cases),          odd_nilpotence(cases),        leibniz_odd(cases),
          leibniz_even(cases),             partial_commutation(cases),   super_jacobi(cases),
          supertrace_of_bracket(cases),    dh_squared(cases),            total_derivatives_commute(cases),
          gauge_composition(cases),        projective_homomorphism(cases)};
}

}  // namespace gzcr::testing
