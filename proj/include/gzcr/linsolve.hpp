#pragma once

#include <cstddef>
#include <map>
#include <utility>
#include <variant>
#include <vector>

#include "gzcr/superscalar.hpp"

namespace gzcr {

using SparseVector = std::vector<std::pair<std::size_t, GaussianRational>>;

// sum_j a_j x_j = rhs
struct LinearEquation {
  SparseVector coefficients;  // ascending columns, no zeros
  GaussianRational rhs;
};

struct LinearSolution {
  std::vector<GaussianRational> particular;  // free columns set to zero
  std::vector<std::size_t> free_columns;
  // kernel[k] has 1 at free_columns[k] and 0 at every other free column
  std::vector<SparseVector> kernel;
};

// sum_r multipliers[r] * equation_r has zero coefficients and right-hand
// side `value` != 0.
struct Inconsistency {
  SparseVector multipliers;
  GaussianRational value;
};

class LinearSystem {
 public:
  explicit LinearSystem(std::size_t columns) : columns_(columns) {}
  void add(LinearEquation eq);
  std::size_t columns() const { return columns_; }
  const std::vector<LinearEquation>& equations() const { return equations_; }

 private:
  std::size_t columns_;
  std::vector<LinearEquation> equations_;
};

// Exact sparse Gaussian elimination with a fixed pivot order (the leading
// column of each row, rows taken shortest first).
std::variant<LinearSolution, Inconsistency> solve(const LinearSystem& system);

bool verify_inconsistency(const LinearSystem& system, const Inconsistency& cert);
bool satisfies(const LinearSystem& system, const std::vector<GaussianRational>& x);

// Collects the equations "coefficient of every monomial of every residual
// component vanishes" for a residual affine in the unknowns:
//   residual = constant + sum_k x_k * column_k.
class AffineAssembler {
 public:
  using Key = std::pair<std::size_t, Monomial>;

  AffineAssembler(std::size_t components, std::size_t unknowns) : components_(components), unknowns_(unknowns) {}
  void set_constant(const std::vector<GradedPoly>& constant);
  // Columns must be added in ascending order of k.
  void add_column(std::size_t k, const std::vector<GradedPoly>& contribution);

  // System together with the (component, monomial) label of each equation.
  std::pair<LinearSystem, std::vector<Key>> build() const;

 private:
  std::size_t components_;
  std::size_t unknowns_;
  std::map<Key, LinearEquation> rows_;
};

}  // namespace gzcr
