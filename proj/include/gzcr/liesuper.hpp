#pragma once

#include <functional>
#include <string>
#include <vector>

#include "gzcr/jets.hpp"

namespace gzcr {

// (even | odd) block sizes; for gl(k0+1|k1) this is (k0+1, k1).
struct BlockSignature {
  int even = 0;
  int odd = 0;
  int size() const { return even + odd; }
  Parity block(int i) const { return i < even ? Parity::Even : Parity::Odd; }
  std::string to_string() const;
  friend bool operator==(const BlockSignature&, const BlockSignature&) = default;
};

class SuperMatrix {
 public:
  SuperMatrix() = default;
  explicit SuperMatrix(BlockSignature sig);
  static SuperMatrix identity(BlockSignature sig);
  // Matrix unit E_ij, 0-based.
  static SuperMatrix unit(BlockSignature sig, int i, int j);

  const BlockSignature& signature() const { return sig_; }
  int size() const { return sig_.size(); }
  const GradedPoly& at(int i, int j) const { return entries_[index(i, j)]; }
  GradedPoly& at(int i, int j) { return entries_[index(i, j)]; }

  Parity position_parity(int i, int j) const { return sig_.block(i) + sig_.block(j); }
  // Parity of a homogeneous matrix (zero counts as even).
  std::optional<Parity> parity_if_homogeneous() const;
  Parity parity() const;
  // Even and odd parts by total parity of each term.
  std::pair<SuperMatrix, SuperMatrix> split_parity() const;

  bool is_zero() const;
  // Supertrace; for odd matrices the diagonal sum without block signs.
  GradedPoly supertrace() const;

  SuperMatrix map(const std::function<GradedPoly(const GradedPoly&)>& fn) const;

  SuperMatrix& operator+=(const SuperMatrix& o);
  SuperMatrix& operator-=(const SuperMatrix& o);
  friend SuperMatrix operator+(SuperMatrix a, const SuperMatrix& b) { return a += b; }
  friend SuperMatrix operator-(SuperMatrix a, const SuperMatrix& b) { return a -= b; }
  friend SuperMatrix operator*(const SuperMatrix& a, const SuperMatrix& b);
  // Scalar on the left.
  friend SuperMatrix operator*(const GradedPoly& c, const SuperMatrix& m);
  SuperMatrix operator-() const;
  friend bool operator==(const SuperMatrix& a, const SuperMatrix& b) {
    return a.sig_ == b.sig_ && a.entries_ == b.entries_;
  }

  std::string to_string() const;

 private:
  std::size_t index(int i, int j) const;
  void check_same_shape(const SuperMatrix& o) const;

  BlockSignature sig_;
  std::vector<GradedPoly> entries_;
};

// AB - (-1)^{p(A)p(B)} BA, extended bilinearly over parity parts.
SuperMatrix supercommutator(const SuperMatrix& a, const SuperMatrix& b);

// Inverse by Gauss-Jordan elimination with unit pivots.
std::optional<SuperMatrix> inverse(const SuperMatrix& m);

// g-valued horizontal form: degree 0 {M}, degree 1 {A dx, B dt}, degree 2
// {C dx^dt}.
class HorizontalForm {
 public:
  static HorizontalForm zero_form(SuperMatrix m);
  static HorizontalForm one_form(SuperMatrix a, SuperMatrix b);
  static HorizontalForm two_form(SuperMatrix c);

  int degree() const { return degree_; }
  const std::vector<SuperMatrix>& components() const { return comps_; }
  const SuperMatrix& component(std::size_t k) const { return comps_.at(k); }
  bool is_zero() const;
  Parity parity() const;

  HorizontalForm& operator+=(const HorizontalForm& o);
  friend HorizontalForm operator+(HorizontalForm a, const HorizontalForm& b) { return a += b; }
  HorizontalForm operator-() const;
  friend bool operator==(const HorizontalForm&, const HorizontalForm&) = default;

 private:
  HorizontalForm(int degree, std::vector<SuperMatrix> comps) : degree_(degree), comps_(std::move(comps)) {}
  int degree_ = 0;
  std::vector<SuperMatrix> comps_;
};

class DegreeError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

HorizontalForm bracket_forms(const HorizontalForm& rho, const HorizontalForm& sigma);
HorizontalForm dh_form(const EvolutionarySystem& system, const HorizontalForm& rho);

}  // namespace gzcr
