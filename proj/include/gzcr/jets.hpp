#pragma once

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "gzcr/superscalar.hpp"

namespace gzcr {

// Independents x, t and the dependent variables (stored as order-0 jets).
struct JetSpace {
  Variable x = Variable::independent("x");
  Variable t = Variable::independent("t");
  std::vector<Variable> dependents;

  bool has_dependent(const Variable& base) const;
  // True for jets of declared dependents and for x, t.
  bool owns(const Variable& v) const;
};

// u^k_t = F^k in pure x-derivative coordinates.
class EvolutionarySystem {
 public:
  EvolutionarySystem(std::string name, JetSpace space, std::vector<Variable> parameters,
                     std::map<Variable, GradedPoly> rhs);

  const std::string& name() const { return name_; }
  const JetSpace& space() const { return space_; }
  const std::vector<Variable>& parameters() const { return parameters_; }
  const std::map<Variable, GradedPoly>& rhs() const { return rhs_; }
  const GradedPoly& rhs(const Variable& dependent) const;

 private:
  std::string name_;
  JetSpace space_;
  std::vector<Variable> parameters_;
  std::map<Variable, GradedPoly> rhs_;
};

using SystemPtr = std::shared_ptr<const EvolutionarySystem>;

enum class NonlocalPolicy { Reject, Constant };

class UnknownVariable : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// D_x on the free jet space: d/dx plus the shift u_s -> u_{s+1}.  Nonlocal
// variables are rejected unless treated as constants.
GradedPoly free_total_x(const GradedPoly& f, NonlocalPolicy policy = NonlocalPolicy::Reject);

GradedPoly total_x(const EvolutionarySystem& system, const GradedPoly& f,
                   NonlocalPolicy policy = NonlocalPolicy::Reject);
// D_t restricted to the equation: d/dt + sum D_x^s(F) d/du_s.
GradedPoly total_t(const EvolutionarySystem& system, const GradedPoly& f,
                   NonlocalPolicy policy = NonlocalPolicy::Reject);
// D_x^n
GradedPoly total_x_power(const EvolutionarySystem& system, const GradedPoly& f, int n,
                         NonlocalPolicy policy = NonlocalPolicy::Reject);

// The N=2 superfield equation
//   u_t = -u_xxx + 3(u D1D2 u)_x + (a-1)/2 (D1D2 u^2)_x + 3a u^2 u_x,
// u = u0 + th1 u1 + th2 u2 + th1 th2 u12, D_i = d/dth_i + th_i d/dx.
struct SuperfieldEquation {
  GradedPoly a = 4;
};

// Component system; a symbolic `a` must be a single parameter variable.
EvolutionarySystem expand_superfield(const SuperfieldEquation& eq, const std::string& name = "skdv");
// Sets odd dependents to zero and drops their equations.
EvolutionarySystem bosonic_limit(const EvolutionarySystem& system, const std::string& name = "");

}  // namespace gzcr
