#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "gzcr/linsolve.hpp"
#include "gzcr/liesuper.hpp"

namespace gzcr {

// alpha = A dx + B dt depending on `parameter`.
struct ZCRFamily {
  SystemPtr system;
  SuperMatrix A;
  SuperMatrix B;
  Variable parameter;

  // Checks that A, B are even and share a signature.
  void validate() const;
  HorizontalForm alpha() const { return HorizontalForm::one_form(A, B); }
  ZCRFamily with_matrices(SuperMatrix a, SuperMatrix b) const;
  // alpha with the parameter replaced by a constant.
  ZCRFamily at(const GaussianRational& value) const;
};

// D_x B - D_t A - [A, B]
SuperMatrix mc_residual(const ZCRFamily& z);

// A -> (D_x S) S^-1 + S A S^-1, B likewise with D_t.
ZCRFamily gauge_transform(const ZCRFamily& z, const SuperMatrix& s);

// (dA/dλ - D_x Q + [A, Q], dB/dλ - D_t Q + [B, Q])
HorizontalForm removability_residual(const ZCRFamily& z, const SuperMatrix& q);

struct AnsatzSpec {
  int max_jet_order = 2;
  int max_grassmann_degree = 2;
  // Total degree in jet coordinates.
  int max_field_degree = 2;
  // Exponent window for an invertible parameter.
  int exponent_min = 0;
  int exponent_max = 0;
  // Degree bound for a non-invertible parameter.
  int lambda_degree = 0;
  std::size_t size_cap = 0;  // 0: take the environment default

  std::string describe(const Variable& parameter) const;
};

// GRADED_ZCR_ANSATZ_CAP, default 20000.
std::size_t default_ansatz_cap();

class AnsatzTooLarge : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct AnsatzElement {
  int row;
  int col;
  Monomial monomial;
};

// Monomials in the jet coordinates of `system` within the bounds, ascending.
std::vector<Monomial> jet_monomials(const EvolutionarySystem& system, int max_order, int max_degree,
                                    int max_odd);
// Even-parity pairs (m * parameter power, E_ij) spanning the ansatz.
std::vector<AnsatzElement> removability_ansatz(const ZCRFamily& z, const AnsatzSpec& spec);

struct RemovabilitySolution {
  AnsatzSpec spec;
  BlockSignature signature;
  std::vector<AnsatzElement> basis;
  SuperMatrix particular;
  std::vector<SuperMatrix> kernel;
  std::vector<std::size_t> free_columns;
  std::size_t equations = 0;
  bool verified = false;

  SuperMatrix to_matrix(const std::vector<GaussianRational>& coords) const;
  std::optional<std::vector<GaussianRational>> coordinates(const SuperMatrix& q) const;
  // Q lies in particular + span(kernel).
  bool contains(const SuperMatrix& q) const;
};

struct NoSolutionCertificate {
  AnsatzSpec spec;
  std::size_t basis_size = 0;
  std::size_t equations = 0;
  // Labelled equations and multipliers whose combination reads 0 = value.
  std::vector<std::pair<std::string, GaussianRational>> combination;
  GaussianRational value;
  bool verified = false;
};

using RemovabilityResult = std::variant<RemovabilitySolution, NoSolutionCertificate>;

RemovabilityResult solve_removability(const ZCRFamily& z, const AnsatzSpec& spec);

class IntegrationFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Solves dS/dλ = Q S, S(λ0) = 1 by a power series in λ - λ0; throws unless
// the series terminates within `order_bound` terms.
SuperMatrix integrate_gauge(const SuperMatrix& q, const Variable& lambda, const GaussianRational& lambda0,
                            int order_bound = 64);

// A single printed term of A or B replaced so that the MC residual vanishes.
struct TermCorrection {
  char matrix;  // 'A' or 'B'
  int row;
  int col;
  GradedPoly printed;      // the original term
  GradedPoly replacement;  // zero when the fix deletes the term
  std::string describe() const;
};

// Tries, one printed term at a time, every replacement c' * m * eps^s with
// |s| <= max_shift and c' a free coefficient (c' = 0 deletes the term);
// returns all replacements that zero the residual.
std::vector<TermCorrection> single_term_corrections(const ZCRFamily& z, const Variable& eps, int max_shift = 2);

}  // namespace gzcr
