#include "gzcr/variable.hpp"

#include <cctype>
#include <mutex>
#include <stdexcept>
#include <unordered_set>

namespace gzcr {

namespace {

const std::string* intern(std::string_view name) {
  static std::mutex mutex;
  static std::unordered_set<std::string> names;
  std::lock_guard<std::mutex> lock(mutex);
  return &*names.emplace(name).first;
}

int kind_group(VarKind k) {
  switch (k) {
    case VarKind::OddIndependent: return 0;
    case VarKind::Independent: return 1;
    case VarKind::EvenJet:
    case VarKind::OddJet: return 2;
    case VarKind::EvenNonlocal:
    case VarKind::OddNonlocal: return 3;
    case VarKind::Parameter: return 4;
  }
  return 5;
}

}  // namespace

const char* to_string(Parity p) { return p == Parity::Even ? "even" : "odd"; }

Variable::Variable(VarKind kind, std::string_view name, int order, bool invertible)
    : name_(intern(name)), order_(order), kind_(kind), invertible_(invertible) {
  if (name.empty()) throw std::invalid_argument("empty variable name");
  if (order < 0) throw std::invalid_argument("negative derivative order");
}

Variable Variable::independent(std::string_view name) { return {VarKind::Independent, name, 0, false}; }

Variable Variable::odd_independent(std::string_view name) {
  return {VarKind::OddIndependent, name, 0, false};
}

Variable Variable::jet(std::string_view name, Parity parity, int order) {
  return {parity == Parity::Odd ? VarKind::OddJet : VarKind::EvenJet, name, order, false};
}

Variable Variable::nonlocal(std::string_view name, Parity parity) {
  return {parity == Parity::Odd ? VarKind::OddNonlocal : VarKind::EvenNonlocal, name, 0, false};
}

Variable Variable::parameter(std::string_view name, bool invertible) {
  return {VarKind::Parameter, name, 0, invertible};
}

Parity Variable::parity() const {
  switch (kind_) {
    case VarKind::OddIndependent:
    case VarKind::OddJet:
    case VarKind::OddNonlocal: return Parity::Odd;
    default: return Parity::Even;
  }
}

Variable Variable::prolonged(int by) const {
  if (!is_jet()) throw std::logic_error("prolongation of non-jet variable " + label());
  Variable v = *this;
  v.order_ += by;
  return v;
}

Variable Variable::base() const {
  Variable v = *this;
  v.order_ = 0;
  return v;
}

std::string Variable::label() const {
  if (!name_) return "<invalid>";
  if (order_ == 0) return *name_;
  return *name_ + "_" + std::string(static_cast<std::size_t>(order_), 'x');
}

std::strong_ordering natural_compare(std::string_view a, std::string_view b) {
  std::size_t i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    bool da = std::isdigit(static_cast<unsigned char>(a[i])) != 0;
    bool db = std::isdigit(static_cast<unsigned char>(b[j])) != 0;
    if (da && db) {
      std::size_t ei = i, ej = j;
      while (ei < a.size() && std::isdigit(static_cast<unsigned char>(a[ei]))) ++ei;
      while (ej < b.size() && std::isdigit(static_cast<unsigned char>(b[ej]))) ++ej;
      std::string_view na = a.substr(i, ei - i), nb = b.substr(j, ej - j);
      while (na.size() > 1 && na.front() == '0') na.remove_prefix(1);
      while (nb.size() > 1 && nb.front() == '0') nb.remove_prefix(1);
      if (na.size() != nb.size()) return na.size() <=> nb.size();
      if (auto c = na.compare(nb); c != 0) return c <=> 0;
      i = ei;
      j = ej;
      continue;
    }
    if (a[i] != b[j]) return a[i] <=> b[j];
    ++i;
    ++j;
  }
  if (auto c = (a.size() - i) <=> (b.size() - j); c != 0) return c;
  return a.compare(b) <=> 0;
}

std::strong_ordering operator<=>(const Variable& a, const Variable& b) {
  if (a.name_ == b.name_ && a.kind_ == b.kind_) return a.order_ <=> b.order_;
  if (auto c = kind_group(a.kind_) <=> kind_group(b.kind_); c != 0) return c;
  if (a.name_ != b.name_) {
    if (auto c = natural_compare(*a.name_, *b.name_); c != 0) return c;
  }
  if (auto c = a.order_ <=> b.order_; c != 0) return c;
  return static_cast<int>(a.kind_) <=> static_cast<int>(b.kind_);
}

}  // namespace gzcr
