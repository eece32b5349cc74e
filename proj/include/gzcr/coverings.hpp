#pragma once

#include <map>
#include <string>
#include <vector>

#include "gzcr/zcr.hpp"

namespace gzcr {

// Affine chart of the projective superspace: w^1..w^k0 even, f^1..f^k1 odd.
struct ProjectiveChart {
  std::vector<Variable> w;
  std::vector<Variable> f;
  GaussianRational mu = 1;

  // Names w, f for one coordinate each, w1.., f1.. otherwise.
  static ProjectiveChart standard(const BlockSignature& sig, GaussianRational mu = 1);
  std::vector<Variable> nonlocals() const;
};

// Vector field along nonlocal variables: sum_v components[v] d/dv.
struct RepVectorField {
  std::map<Variable, GradedPoly> components;

  GradedPoly component(const Variable& v) const;
  // X(p) with coefficient on the left and left derivatives.
  GradedPoly apply(const GradedPoly& p) const;
  bool is_zero() const;
};

// Graded commutator of two vector fields, as a field.
RepVectorField commutator(const RepVectorField& x, const RepVectorField& y);

// Image of g under v -> v g d/dv pushed to the affine chart.
RepVectorField projective_rep(const SuperMatrix& g, const ProjectiveChart& chart);

class Covering {
 public:
  struct Flow {
    GradedPoly x;
    GradedPoly t;
  };

  Covering(std::string name, SystemPtr system, std::vector<Variable> nonlocals, std::vector<Variable> parameters,
           std::map<Variable, Flow> flows);

  const std::string& name() const { return name_; }
  const SystemPtr& system() const { return system_; }
  const std::vector<Variable>& nonlocals() const { return nonlocals_; }
  const std::vector<Variable>& parameters() const { return parameters_; }
  const std::map<Variable, Flow>& flows() const { return flows_; }
  const Flow& flow(const Variable& v) const;

  // Prolonged total derivatives.
  GradedPoly dx(const GradedPoly& p) const;
  GradedPoly dt(const GradedPoly& p) const;

 private:
  std::string name_;
  SystemPtr system_;
  std::vector<Variable> nonlocals_;
  std::vector<Variable> parameters_;
  std::map<Variable, Flow> flows_;
};

// w_x = -X_A(w), w_t = -X_B(w) for every chart coordinate.
Covering covering_from_zcr(const ZCRFamily& z, const ProjectiveChart& chart, const std::string& name = "");

// D~_x(v_t) - D~_t(v_x) per nonlocal variable.
std::map<Variable, GradedPoly> flatness_residual(const Covering& c);

// Vertical generator: phi' on nonlocals, omega' seeds on dependents.
struct ShadowField {
  std::map<Variable, GradedPoly> phi;
  std::map<Variable, GradedPoly> omega;

  bool is_zero() const;
};

// General field a d/dx + b d/dt + omega d/du + phi d/dw.
struct GeneralField {
  GradedPoly a;
  GradedPoly b;
  std::map<Variable, GradedPoly> omega;
  std::map<Variable, GradedPoly> phi;
};

// phi' = phi - a w_x - b w_t, omega' = omega - a u_x - b u_t.
ShadowField verticalize(const GeneralField& field, const Covering& c);

struct StructureResidual {
  GradedPoly x;
  GradedPoly t;
  bool is_zero() const { return x.is_zero() && t.is_zero(); }
};

// For every nonlocal v:
//   rate * d(v_x)/d(param) - X(v_x) + D~_x phi'_v, and the same with t,
// where X acts on jets through the prolonged seeds D~_x^s omega'.  `rate`
// is d(param)/d(lambda); rate 0 gives the part linear in X.
std::map<Variable, StructureResidual> fn_structure_residual(const Covering& c, const Variable& param,
                                                            const ShadowField& x, const GradedPoly& rate = 1);

// X = q^k rho(e_k): phi' from the projective image of Q, no omega.
ShadowField shadow_from_gmatrix(const SuperMatrix& q, const ProjectiveChart& chart);

struct DiagramVerdict {
  bool commutes = false;
  // per nonlocal: (dx part, dt part)
  std::map<Variable, std::pair<GradedPoly, GradedPoly>> top;
  std::map<Variable, std::pair<GradedPoly, GradedPoly>> bottom;
};

// Top: image of (D_x g - [A, g], D_t g - [B, g]) under projective_rep.
// Bottom: D~_x(X_g(v)) - X_g(v_x) and the t analogue on the covering
// built from z.
DiagramVerdict diagram_check(const ZCRFamily& z, const SuperMatrix& gamma, const ProjectiveChart& chart);

// Completion of a partially known shadow: phi' corrections are sought in
// span(candidates[v]) for each nonlocal v.
struct ShadowCompletion {
  bool found = false;
  ShadowField field;                                   // seed plus particular correction
  std::vector<std::pair<Variable, GradedPoly>> added;  // nonzero correction terms
  std::size_t unknowns = 0;
  std::size_t free_directions = 0;
  std::size_t equations = 0;
};

ShadowCompletion complete_shadow(const Covering& c, const Variable& param, const GradedPoly& rate,
                                 const ShadowField& seed, const std::map<Variable, std::vector<Monomial>>& candidates);

}  // namespace gzcr
