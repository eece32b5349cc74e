#include <algorithm>

#include "gzcr/superscalar.hpp"

namespace gzcr {

Monomial Monomial::of(const Variable& v, int exponent) {
  Monomial m;
  if (exponent == 0) return m;
  if (v.is_odd()) {
    if (exponent != 1) throw ParityError("odd variable " + v.label() + " raised to power " + std::to_string(exponent));
    m.odds_.push_back(v);
    return m;
  }
  if (exponent < 0 && !(v.is_parameter() && v.invertible())) {
    throw std::domain_error("negative power of non-invertible variable " + v.label());
  }
  m.evens_.emplace_back(v, exponent);
  return m;
}

int Monomial::exponent(const Variable& v) const {
  if (v.is_odd()) return contains(v) ? 1 : 0;
  auto it = std::lower_bound(evens_.begin(), evens_.end(), v,
                             [](const EvenFactor& f, const Variable& x) { return f.first < x; });
  return (it != evens_.end() && it->first == v) ? it->second : 0;
}

bool Monomial::contains(const Variable& v) const {
  if (!v.is_odd()) return exponent(v) != 0;
  return std::binary_search(odds_.begin(), odds_.end(), v);
}

int Monomial::field_degree() const {
  int d = 0;
  for (const auto& [v, e] : evens_) {
    if (v.is_jet() || v.is_nonlocal()) d += e;
  }
  for (const auto& v : odds_) {
    if (v.is_jet() || v.is_nonlocal()) ++d;
  }
  return d;
}

std::optional<std::pair<Monomial, int>> Monomial::multiply(const Monomial& a, const Monomial& b) {
  Monomial r;
  // odd part: merge, counting inversions between the two runs
  r.odds_.reserve(a.odds_.size() + b.odds_.size());
  std::size_t i = 0, j = 0;
  long inversions = 0;
  while (i < a.odds_.size() && j < b.odds_.size()) {
    auto c = a.odds_[i] <=> b.odds_[j];
    if (c == 0) return std::nullopt;
    if (c < 0) {
      r.odds_.push_back(a.odds_[i++]);
    } else {
      inversions += static_cast<long>(a.odds_.size() - i);
      r.odds_.push_back(b.odds_[j++]);
    }
  }
  while (i < a.odds_.size()) r.odds_.push_back(a.odds_[i++]);
  while (j < b.odds_.size()) r.odds_.push_back(b.odds_[j++]);

  r.evens_.reserve(a.evens_.size() + b.evens_.size());
  i = 0;
  j = 0;
  while (i < a.evens_.size() && j < b.evens_.size()) {
    auto c = a.evens_[i].first <=> b.evens_[j].first;
    if (c < 0) {
      r.evens_.push_back(a.evens_[i++]);
    } else if (c > 0) {
      r.evens_.push_back(b.evens_[j++]);
    } else {
      int e = a.evens_[i].second + b.evens_[j].second;
      if (e != 0) r.evens_.emplace_back(a.evens_[i].first, e);
      ++i;
      ++j;
    }
  }
  while (i < a.evens_.size()) r.evens_.push_back(a.evens_[i++]);
  while (j < b.evens_.size()) r.evens_.push_back(b.evens_[j++]);
  return std::make_pair(std::move(r), inversions % 2 ? -1 : 1);
}

std::optional<std::pair<Monomial, int>> Monomial::remove_odd(const Variable& v) const {
  auto it = std::lower_bound(odds_.begin(), odds_.end(), v);
  if (it == odds_.end() || !(*it == v)) return std::nullopt;
  auto before = it - odds_.begin();
  Monomial r = *this;
  r.odds_.erase(r.odds_.begin() + before);
  return std::make_pair(std::move(r), before % 2 ? -1 : 1);
}

Monomial Monomial::with_exponent(const Variable& v, int exponent) const {
  if (v.is_odd()) throw ParityError("with_exponent on odd variable");
  Monomial r = *this;
  auto it = std::lower_bound(r.evens_.begin(), r.evens_.end(), v,
                             [](const EvenFactor& f, const Variable& x) { return f.first < x; });
  bool present = it != r.evens_.end() && it->first == v;
  if (exponent == 0) {
    if (present) r.evens_.erase(it);
  } else if (present) {
    it->second = exponent;
  } else {
    r.evens_.insert(it, {v, exponent});
  }
  return r;
}

std::string Monomial::to_string() const {
  std::string out;
  for (const auto& [v, e] : evens_) {
    if (!out.empty()) out += '*';
    out += v.label();
    if (e != 1) out += '^' + std::to_string(e);
  }
  for (const auto& v : odds_) {
    if (!out.empty()) out += '*';
    out += v.label();
  }
  return out.empty() ? "1" : out;
}

std::strong_ordering operator<=>(const Monomial& a, const Monomial& b) {
  // lower total field degree first, then lexicographic
  if (auto c = a.field_degree() <=> b.field_degree(); c != 0) return c;
  if (auto c = std::lexicographical_compare_three_way(
          a.evens_.begin(), a.evens_.end(), b.evens_.begin(), b.evens_.end(),
          [](const Monomial::EvenFactor& x, const Monomial::EvenFactor& y) {
            if (auto c = x.first <=> y.first; c != 0) return c;
            return y.second <=> x.second;
          });
      c != 0) {
    return c;
  }
  return std::lexicographical_compare_three_way(a.odds_.begin(), a.odds_.end(), b.odds_.begin(), b.odds_.end());
}

}  // namespace gzcr
