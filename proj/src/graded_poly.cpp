#include <algorithm>

#include "gzcr/superscalar.hpp"

namespace gzcr {

GradedPoly::GradedPoly(GaussianRational c) {
  if (!c.is_zero()) terms_.emplace(Monomial(), std::move(c));
}

GradedPoly GradedPoly::variable(const Variable& v, int exponent) { return term(Monomial::of(v, exponent), 1); }

GradedPoly GradedPoly::term(const Monomial& m, const GaussianRational& c) {
  GradedPoly p;
  if (!c.is_zero()) p.terms_.emplace(m, c);
  return p;
}

bool GradedPoly::is_constant() const {
  return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first.is_one());
}

GaussianRational GradedPoly::coefficient(const Monomial& m) const {
  auto it = terms_.find(m);
  return it == terms_.end() ? GaussianRational() : it->second;
}

std::optional<Parity> GradedPoly::parity_if_homogeneous() const {
  if (terms_.empty()) return Parity::Even;
  Parity p = terms_.begin()->first.parity();
  for (const auto& [m, c] : terms_) {
    if (m.parity() != p) return std::nullopt;
  }
  return p;
}

Parity GradedPoly::parity() const {
  auto p = parity_if_homogeneous();
  if (!p) throw ParityError("parity of non-homogeneous value " + to_string());
  return *p;
}

std::pair<GradedPoly, GradedPoly> GradedPoly::split_parity() const {
  std::pair<GradedPoly, GradedPoly> out;
  for (const auto& [m, c] : terms_) {
    (m.parity() == Parity::Even ? out.first : out.second).terms_.emplace_hint(
        (m.parity() == Parity::Even ? out.first : out.second).terms_.end(), m, c);
  }
  return out;
}

std::set<Variable> GradedPoly::variables() const {
  std::set<Variable> out;
  for (const auto& [m, c] : terms_) {
    for (const auto& [v, e] : m.evens()) out.insert(v);
    for (const auto& v : m.odds()) out.insert(v);
  }
  return out;
}

void GradedPoly::add_term(const Monomial& m, const GaussianRational& c) {
  if (c.is_zero()) return;
  auto [it, inserted] = terms_.try_emplace(m, c);
  if (!inserted) {
    it->second += c;
    if (it->second.is_zero()) terms_.erase(it);
  }
}

GradedPoly& GradedPoly::operator+=(const GradedPoly& o) {
  for (const auto& [m, c] : o.terms_) add_term(m, c);
  return *this;
}

GradedPoly& GradedPoly::operator-=(const GradedPoly& o) {
  for (const auto& [m, c] : o.terms_) add_term(m, -c);
  return *this;
}

GradedPoly& GradedPoly::operator*=(const GaussianRational& c) {
  if (c.is_zero()) {
    terms_.clear();
    return *this;
  }
  for (auto& [m, v] : terms_) v *= c;
  return *this;
}

GradedPoly& GradedPoly::operator*=(const GradedPoly& o) { return *this = *this * o; }

GradedPoly operator*(const GradedPoly& a, const GradedPoly& b) {
  GradedPoly out;
  for (const auto& [ma, ca] : a.terms_) {
    for (const auto& [mb, cb] : b.terms_) {
      auto prod = Monomial::multiply(ma, mb);
      if (!prod) continue;
      GaussianRational c = ca * cb;
      if (prod->second < 0) c = -c;
      out.add_term(prod->first, c);
    }
  }
  return out;
}

GradedPoly GradedPoly::operator-() const {
  GradedPoly r = *this;
  for (auto& [m, c] : r.terms_) c = -c;
  return r;
}

std::optional<GradedPoly> GradedPoly::inverse() const {
  // body = terms without odd factors; it must be a single unit monomial
  GradedPoly body, soul;
  for (const auto& [m, c] : terms_) {
    (m.odds().empty() ? body : soul).terms_.emplace(m, c);
  }
  if (body.terms_.size() != 1) return std::nullopt;
  const auto& [bm, bc] = *body.terms_.begin();
  Monomial inv_m;
  for (const auto& [v, e] : bm.evens()) {
    if (!(v.is_parameter() && v.invertible())) return std::nullopt;
    inv_m = inv_m.with_exponent(v, -e);
  }
  GradedPoly u_inv = term(inv_m, bc.inverse());
  if (soul.is_zero()) return u_inv;
  // (u + n)^-1 = u^-1 * sum_k (-n u^-1)^k, terminating because n is nilpotent
  GradedPoly step = -(soul * u_inv);
  GradedPoly sum = 1;
  GradedPoly power = 1;
  for (;;) {
    power = power * step;
    if (power.is_zero()) break;
    sum += power;
  }
  return u_inv * sum;
}

GradedPoly GradedPoly::pow(int n) const {
  if (n < 0) {
    auto inv = inverse();
    if (!inv) throw std::domain_error("negative power of non-unit " + to_string());
    return inv->pow(-n);
  }
  GradedPoly result = 1;
  GradedPoly base = *this;
  while (n > 0) {
    if (n & 1) result = result * base;
    n >>= 1;
    if (n) base = base * base;
  }
  return result;
}

GradedPoly GradedPoly::conj() const {
  GradedPoly r = *this;
  for (auto& [m, c] : r.terms_) c = c.conj();
  return r;
}

std::string GradedPoly::to_string() const {
  if (terms_.empty()) return "0";
  std::string out;
  bool first = true;
  for (const auto& [m, c] : terms_) {
    bool negative = false;
    GaussianRational shown = c;
    if (c.is_real() && sgn(c.re()) < 0) {
      negative = true;
      shown = -c;
    } else if (sgn(c.re()) == 0 && sgn(c.im()) < 0) {
      negative = true;
      shown = -c;
    }
    if (first) {
      if (negative) out += '-';
    } else {
      out += negative ? " - " : " + ";
    }
    first = false;
    if (m.is_one()) {
      out += shown.to_string();
    } else if (shown.is_one()) {
      out += m.to_string();
    } else {
      out += shown.to_string() + "*" + m.to_string();
    }
  }
  return out;
}

GradedPoly odd_partial(const GradedPoly& f, const Variable& v) {
  if (!v.is_odd()) throw ParityError("odd_partial along even variable " + v.label());
  GradedPoly out;
  for (const auto& [m, c] : f.terms()) {
    auto r = m.remove_odd(v);
    if (!r) continue;
    out += GradedPoly::term(r->first, r->second < 0 ? -c : c);
  }
  return out;
}

GradedPoly even_partial(const GradedPoly& f, const Variable& v) {
  if (v.is_odd()) throw ParityError("even_partial along odd variable " + v.label());
  GradedPoly out;
  for (const auto& [m, c] : f.terms()) {
    int e = m.exponent(v);
    if (e == 0) continue;
    out += GradedPoly::term(m.with_exponent(v, e - 1), c * GaussianRational(e));
  }
  return out;
}

GradedPoly partial(const GradedPoly& f, const Variable& v) {
  return v.is_odd() ? odd_partial(f, v) : even_partial(f, v);
}

GradedPoly substitute(const GradedPoly& f, const std::map<Variable, GradedPoly>& binding) {
  for (const auto& [v, value] : binding) {
    if (value.is_zero()) continue;
    auto p = value.parity_if_homogeneous();
    if (!p || *p != v.parity()) {
      throw ParityError("substitution of " + v.label() + " by value of wrong parity: " + value.to_string());
    }
  }
  GradedPoly out;
  for (const auto& [m, c] : f.terms()) {
    GradedPoly t = c;
    for (const auto& [v, e] : m.evens()) {
      auto it = binding.find(v);
      t = t * (it == binding.end() ? GradedPoly::variable(v, e) : it->second.pow(e));
    }
    // odd factors in canonical order, each inserted at its own position
    for (const auto& v : m.odds()) {
      auto it = binding.find(v);
      t = t * (it == binding.end() ? GradedPoly::variable(v) : it->second);
      if (t.is_zero()) break;
    }
    out += t;
  }
  return out;
}

std::map<int, GradedPoly> collect_powers(const GradedPoly& f, const Variable& v) {
  std::map<int, GradedPoly> out;
  for (const auto& [m, c] : f.terms()) {
    int e = m.exponent(v);
    out[e] += GradedPoly::term(m.with_exponent(v, 0), c);
  }
  return out;
}

}  // namespace gzcr
