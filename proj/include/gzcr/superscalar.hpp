#pragma once

#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "gzcr/gaussian.hpp"
#include "gzcr/variable.hpp"

namespace gzcr {

class ParityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Product of even powers (Laurent only in invertible parameters) and an
// ascending set of odd variables.
class Monomial {
 public:
  using EvenFactor = std::pair<Variable, int>;

  Monomial() = default;
  static Monomial of(const Variable& v, int exponent = 1);

  const std::vector<EvenFactor>& evens() const { return evens_; }
  const std::vector<Variable>& odds() const { return odds_; }

  bool is_one() const { return evens_.empty() && odds_.empty(); }
  Parity parity() const { return odds_.size() % 2 ? Parity::Odd : Parity::Even; }
  int exponent(const Variable& v) const;
  bool contains(const Variable& v) const;
  // Number of jet/nonlocal factors counted with multiplicity (parameters
  // and independents excluded).
  int field_degree() const;

  // Product with sign from reordering odd factors; nullopt if an odd
  // variable repeats.
  static std::optional<std::pair<Monomial, int>> multiply(const Monomial& a, const Monomial& b);

  // Removes an odd factor; returns the sign (-1)^(odd factors before it).
  std::optional<std::pair<Monomial, int>> remove_odd(const Variable& v) const;
  Monomial with_exponent(const Variable& v, int exponent) const;

  std::string to_string() const;

  friend bool operator==(const Monomial&, const Monomial&) = default;
  friend std::strong_ordering operator<=>(const Monomial& a, const Monomial& b);

 private:
  std::vector<EvenFactor> evens_;
  std::vector<Variable> odds_;
};

class GradedPoly {
 public:
  using Terms = std::map<Monomial, GaussianRational>;

  GradedPoly() = default;
  GradedPoly(GaussianRational c);  // NOLINT(google-explicit-constructor)
  GradedPoly(long c) : GradedPoly(GaussianRational(c)) {}  // NOLINT(google-explicit-constructor)
  static GradedPoly variable(const Variable& v, int exponent = 1);
  static GradedPoly term(const Monomial& m, const GaussianRational& c);

  const Terms& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  bool is_constant() const;
  std::size_t size() const { return terms_.size(); }
  GaussianRational coefficient(const Monomial& m) const;
  // Coefficient of the constant monomial.
  GaussianRational constant_term() const { return coefficient(Monomial()); }

  // Parity of a homogeneous value (zero counts as even); throws otherwise.
  Parity parity() const;
  std::optional<Parity> parity_if_homogeneous() const;
  // Splits into even and odd parts.
  std::pair<GradedPoly, GradedPoly> split_parity() const;

  std::set<Variable> variables() const;

  GradedPoly& operator+=(const GradedPoly& o);
  GradedPoly& operator-=(const GradedPoly& o);
  GradedPoly& operator*=(const GradedPoly& o);
  GradedPoly& operator*=(const GaussianRational& c);
  friend GradedPoly operator+(GradedPoly a, const GradedPoly& b) { return a += b; }
  friend GradedPoly operator-(GradedPoly a, const GradedPoly& b) { return a -= b; }
  friend GradedPoly operator*(const GradedPoly& a, const GradedPoly& b);
  friend GradedPoly operator*(GradedPoly a, const GaussianRational& c) { return a *= c; }
  friend GradedPoly operator*(const GaussianRational& c, GradedPoly a) { return a *= c; }
  GradedPoly operator-() const;

  friend bool operator==(const GradedPoly& a, const GradedPoly& b) { return a.terms_ == b.terms_; }

  // Integer power; negative exponents require a unit.
  GradedPoly pow(int n) const;
  // Units are c*m + nilpotent, with c != 0 and m a monomial in invertible
  // parameters; nullopt otherwise.
  std::optional<GradedPoly> inverse() const;
  bool is_unit() const { return inverse().has_value(); }

  GradedPoly conj() const;

  std::string to_string() const;

 private:
  void add_term(const Monomial& m, const GaussianRational& c);
  Terms terms_;
};

// Left derivative along an odd variable.
GradedPoly odd_partial(const GradedPoly& f, const Variable& v);
// Ordinary derivative along an even variable.
GradedPoly even_partial(const GradedPoly& f, const Variable& v);
// Dispatches on parity of v.
GradedPoly partial(const GradedPoly& f, const Variable& v);

// Simultaneous substitution; parities of bound values must match.
GradedPoly substitute(const GradedPoly& f, const std::map<Variable, GradedPoly>& binding);

// Applies the derivation sum_v comp(v) * d/dv (coefficient on the left, left
// derivatives).  `components` is consulted for every variable occurring in f.
template <class ComponentFn>
GradedPoly apply_derivation(const GradedPoly& f, ComponentFn&& components) {
  GradedPoly out;
  for (const Variable& v : f.variables()) {
    std::optional<GradedPoly> c = components(v);
    if (!c || c->is_zero()) continue;
    out += *c * partial(f, v);
  }
  return out;
}

// Terms of f grouped by the exponent of v (v even, nonnegative exponents).
std::map<int, GradedPoly> collect_powers(const GradedPoly& f, const Variable& v);

}  // namespace gzcr
