#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "gzcr/jets.hpp"

namespace gzcr {

class ParseError : public std::runtime_error {
 public:
  ParseError(int line, int column, const std::string& message);
  int line() const { return line_; }
  int column() const { return column_; }

 private:
  int line_;
  int column_;
};

// Names visible to the expression parser.
class SymbolTable {
 public:
  SymbolTable() = default;
  static SymbolTable for_system(const EvolutionarySystem& system);

  // Declares a base symbol (order-0 jets for dependents).  Redeclaring the
  // same variable is a no-op; a conflicting redeclaration throws.
  void declare(const Variable& v);
  void merge(const SymbolTable& other);
  const Variable* find(std::string_view name) const;
  std::vector<Variable> all() const;

 private:
  std::map<std::string, Variable, std::less<>> by_name_;
};

// Grammar: sums of products of factors; factors are Gaussian rationals
// (integers, `i`), declared identifiers with optional jet suffix `_x..x`
// (or `_t`, `_xt` when a system is given), parenthesised groups with an
// optional total-derivative suffix `(..)_x`, `^` integer powers, and `/`
// by units.  `ε` and `λ` are accepted as spellings of eps and lam.
GradedPoly parse_expression(std::string_view text, const SymbolTable& symbols,
                            const EvolutionarySystem* system = nullptr, int line = 1, int column = 1);

}  // namespace gzcr
