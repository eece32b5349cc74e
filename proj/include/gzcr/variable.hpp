#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <string>
#include <string_view>

namespace gzcr {

enum class Parity : std::uint8_t { Even = 0, Odd = 1 };

inline Parity operator+(Parity a, Parity b) {
  return static_cast<Parity>(static_cast<int>(a) ^ static_cast<int>(b));
}
inline int sign_of(Parity a, Parity b) { return (a == Parity::Odd && b == Parity::Odd) ? -1 : 1; }
const char* to_string(Parity p);

enum class VarKind : std::uint8_t {
  OddIndependent,
  Independent,
  EvenJet,
  OddJet,
  EvenNonlocal,
  OddNonlocal,
  Parameter,
};

// A coordinate of the graded jet space or an auxiliary symbol.  Names are
// interned, so copies are cheap and equality is pointer equality.
//
// The global order is (kind group, natural order of name, derivative order);
// kind groups are θ < x,t < jets < nonlocals < parameters.
class Variable {
 public:
  Variable() = default;

  static Variable independent(std::string_view name);
  static Variable odd_independent(std::string_view name);
  static Variable jet(std::string_view name, Parity parity, int order = 0);
  static Variable nonlocal(std::string_view name, Parity parity);
  static Variable parameter(std::string_view name, bool invertible);

  VarKind kind() const { return kind_; }
  const std::string& name() const { return *name_; }
  int order() const { return order_; }
  bool invertible() const { return invertible_; }
  bool valid() const { return name_ != nullptr; }

  Parity parity() const;
  bool is_odd() const { return parity() == Parity::Odd; }
  bool is_jet() const { return kind_ == VarKind::EvenJet || kind_ == VarKind::OddJet; }
  bool is_nonlocal() const { return kind_ == VarKind::EvenNonlocal || kind_ == VarKind::OddNonlocal; }
  bool is_parameter() const { return kind_ == VarKind::Parameter; }

  // Jet coordinate with `by` more x-derivatives.
  Variable prolonged(int by = 1) const;
  // The order-0 jet coordinate of the same dependent.
  Variable base() const;

  // Printed form, e.g. u12_xxx.
  std::string label() const;

  friend bool operator==(const Variable& a, const Variable& b) {
    return a.name_ == b.name_ && a.order_ == b.order_ && a.kind_ == b.kind_;
  }
  friend std::strong_ordering operator<=>(const Variable& a, const Variable& b);

 private:
  Variable(VarKind kind, std::string_view name, int order, bool invertible);

  const std::string* name_ = nullptr;
  std::int32_t order_ = 0;
  VarKind kind_ = VarKind::Parameter;
  bool invertible_ = false;
};

// Natural order on identifiers: digit runs compare numerically, so u2 < u12.
std::strong_ordering natural_compare(std::string_view a, std::string_view b);

}  // namespace gzcr

template <>
struct std::hash<gzcr::Variable> {
  std::size_t operator()(const gzcr::Variable& v) const noexcept {
    return std::hash<const void*>()(&v.name()) ^ (static_cast<std::size_t>(v.order()) << 1);
  }
};
