#include "gzcr/liesuper.hpp"

namespace gzcr {

std::string BlockSignature::to_string() const {
  return "(" + std::to_string(even) + "|" + std::to_string(odd) + ")";
}

SuperMatrix::SuperMatrix(BlockSignature sig) : sig_(sig), entries_(static_cast<std::size_t>(sig.size() * sig.size())) {
  if (sig.even < 0 || sig.odd < 0 || sig.size() == 0) throw std::invalid_argument("bad block signature");
}

SuperMatrix SuperMatrix::identity(BlockSignature sig) {
  SuperMatrix m(sig);
  for (int i = 0; i < sig.size(); ++i) m.at(i, i) = 1;
  return m;
}

SuperMatrix SuperMatrix::unit(BlockSignature sig, int i, int j) {
  SuperMatrix m(sig);
  m.at(i, j) = 1;
  return m;
}

std::size_t SuperMatrix::index(int i, int j) const {
  if (i < 0 || j < 0 || i >= size() || j >= size()) throw std::out_of_range("matrix index");
  return static_cast<std::size_t>(i * size() + j);
}

void SuperMatrix::check_same_shape(const SuperMatrix& o) const {
  if (!(sig_ == o.sig_)) {
    throw std::invalid_argument("signature mismatch " + sig_.to_string() + " vs " + o.sig_.to_string());
  }
}

std::optional<Parity> SuperMatrix::parity_if_homogeneous() const {
  std::optional<Parity> p;
  for (int i = 0; i < size(); ++i) {
    for (int j = 0; j < size(); ++j) {
      const GradedPoly& e = at(i, j);
      if (e.is_zero()) continue;
      auto q = e.parity_if_homogeneous();
      if (!q) return std::nullopt;
      Parity total = *q + position_parity(i, j);
      if (p && *p != total) return std::nullopt;
      p = total;
    }
  }
  return p ? p : Parity::Even;
}

Parity SuperMatrix::parity() const {
  auto p = parity_if_homogeneous();
  if (!p) throw ParityError("non-homogeneous matrix");
  return *p;
}

std::pair<SuperMatrix, SuperMatrix> SuperMatrix::split_parity() const {
  SuperMatrix ev(sig_), od(sig_);
  for (int i = 0; i < size(); ++i) {
    for (int j = 0; j < size(); ++j) {
      auto [e, o] = at(i, j).split_parity();
      if (position_parity(i, j) == Parity::Even) {
        ev.at(i, j) = std::move(e);
        od.at(i, j) = std::move(o);
      } else {
        ev.at(i, j) = std::move(o);
        od.at(i, j) = std::move(e);
      }
    }
  }
  return {ev, od};
}

bool SuperMatrix::is_zero() const {
  for (const auto& e : entries_) {
    if (!e.is_zero()) return false;
  }
  return true;
}

GradedPoly SuperMatrix::supertrace() const {
  auto [ev, od] = split_parity();
  GradedPoly s;
  for (int i = 0; i < size(); ++i) {
    if (sig_.block(i) == Parity::Even) s += ev.at(i, i);
    else s -= ev.at(i, i);
    s += od.at(i, i);
  }
  return s;
}

SuperMatrix SuperMatrix::map(const std::function<GradedPoly(const GradedPoly&)>& fn) const {
  SuperMatrix r(sig_);
  for (std::size_t k = 0; k < entries_.size(); ++k) r.entries_[k] = fn(entries_[k]);
  return r;
}

SuperMatrix& SuperMatrix::operator+=(const SuperMatrix& o) {
  check_same_shape(o);
  for (std::size_t k = 0; k < entries_.size(); ++k) entries_[k] += o.entries_[k];
  return *this;
}

SuperMatrix& SuperMatrix::operator-=(const SuperMatrix& o) {
  check_same_shape(o);
  for (std::size_t k = 0; k < entries_.size(); ++k) entries_[k] -= o.entries_[k];
  return *this;
}

SuperMatrix operator*(const SuperMatrix& a, const SuperMatrix& b) {
  a.check_same_shape(b);
  SuperMatrix r(a.sig_);
  int n = a.size();
  for (int i = 0; i < n; ++i) {
    for (int k = 0; k < n; ++k) {
      const GradedPoly& aik = a.at(i, k);
      if (aik.is_zero()) continue;
      for (int j = 0; j < n; ++j) {
        const GradedPoly& bkj = b.at(k, j);
        if (bkj.is_zero()) continue;
        r.at(i, j) += aik * bkj;
      }
    }
  }
  return r;
}

SuperMatrix operator*(const GradedPoly& c, const SuperMatrix& m) {
  return m.map([&](const GradedPoly& e) { return c * e; });
}

SuperMatrix SuperMatrix::operator-() const {
  return map([](const GradedPoly& e) { return -e; });
}

std::string SuperMatrix::to_string() const {
  std::string out = sig_.to_string() + "\n";
  for (int i = 0; i < size(); ++i) {
    for (int j = 0; j < size(); ++j) {
      if (j) out += ", ";
      out += at(i, j).to_string();
    }
    out += "\n";
  }
  return out;
}

SuperMatrix supercommutator(const SuperMatrix& a, const SuperMatrix& b) {
  auto pa = a.parity_if_homogeneous();
  auto pb = b.parity_if_homogeneous();
  if (pa && pb) {
    SuperMatrix ab = a * b;
    SuperMatrix ba = b * a;
    return sign_of(*pa, *pb) < 0 ? ab + ba : ab - ba;
  }
  auto [a0, a1] = a.split_parity();
  auto [b0, b1] = b.split_parity();
  return supercommutator(a0, b0) + supercommutator(a0, b1) + supercommutator(a1, b0) + supercommutator(a1, b1);
}

std::optional<SuperMatrix> inverse(const SuperMatrix& m) {
  int n = m.size();
  SuperMatrix work = m;
  SuperMatrix inv = SuperMatrix::identity(m.signature());
  auto row_op = [n](SuperMatrix& x, int target, const GradedPoly& factor, int source) {
    // row_target -= factor * row_source
    for (int j = 0; j < n; ++j) {
      if (!x.at(source, j).is_zero()) x.at(target, j) -= factor * x.at(source, j);
    }
  };
  for (int col = 0; col < n; ++col) {
    int pivot = -1;
    std::optional<GradedPoly> pinv;
    for (int r = col; r < n; ++r) {
      if (work.at(r, col).is_zero()) continue;
      pinv = work.at(r, col).inverse();
      if (pinv) {
        pivot = r;
        break;
      }
    }
    if (pivot < 0) return std::nullopt;
    if (pivot != col) {
      for (int j = 0; j < n; ++j) {
        std::swap(work.at(pivot, j), work.at(col, j));
        std::swap(inv.at(pivot, j), inv.at(col, j));
      }
    }
    for (int j = 0; j < n; ++j) {
      work.at(col, j) = *pinv * work.at(col, j);
      inv.at(col, j) = *pinv * inv.at(col, j);
    }
    for (int r = 0; r < n; ++r) {
      if (r == col || work.at(r, col).is_zero()) continue;
      GradedPoly factor = work.at(r, col);
      row_op(work, r, factor, col);
      row_op(inv, r, factor, col);
    }
  }
  if (!(m * inv == SuperMatrix::identity(m.signature())) || !(inv * m == SuperMatrix::identity(m.signature()))) {
    return std::nullopt;
  }
  return inv;
}

HorizontalForm HorizontalForm::zero_form(SuperMatrix m) { return {0, {std::move(m)}}; }
HorizontalForm HorizontalForm::one_form(SuperMatrix a, SuperMatrix b) { return {1, {std::move(a), std::move(b)}}; }
HorizontalForm HorizontalForm::two_form(SuperMatrix c) { return {2, {std::move(c)}}; }

bool HorizontalForm::is_zero() const {
  for (const auto& c : comps_) {
    if (!c.is_zero()) return false;
  }
  return true;
}

Parity HorizontalForm::parity() const {
  std::optional<Parity> p;
  for (const auto& c : comps_) {
    if (c.is_zero()) continue;
    Parity q = c.parity();
    if (p && *p != q) throw ParityError("non-homogeneous form");
    p = q;
  }
  return p.value_or(Parity::Even);
}

HorizontalForm& HorizontalForm::operator+=(const HorizontalForm& o) {
  if (degree_ != o.degree_) throw DegreeError("adding forms of different degree");
  for (std::size_t k = 0; k < comps_.size(); ++k) comps_[k] += o.comps_[k];
  return *this;
}

HorizontalForm HorizontalForm::operator-() const {
  HorizontalForm r = *this;
  for (auto& c : r.comps_) c = -c;
  return r;
}

namespace {

// Wedge of basis element i (degree r) with j (degree s): sign and index of
// the result in the degree r+s basis; sign 0 when the product vanishes.
std::pair<int, int> wedge(int r, int i, int s, int j) {
  if (r == 0) return {1, j};
  if (s == 0) return {1, i};
  // r = s = 1: dx^dx = dt^dt = 0, dx^dt = +dx^dt, dt^dx = -dx^dt
  if (i == j) return {0, 0};
  return {i == 0 ? 1 : -1, 0};
}

}  // namespace

HorizontalForm bracket_forms(const HorizontalForm& rho, const HorizontalForm& sigma) {
  int d = rho.degree() + sigma.degree();
  if (d > 2) throw DegreeError("bracket of forms exceeds degree 2");
  const BlockSignature sig = rho.component(0).signature();
  std::vector<SuperMatrix> comps(d == 1 ? 2 : 1, SuperMatrix(sig));
  for (int i = 0; i < static_cast<int>(rho.components().size()); ++i) {
    for (int j = 0; j < static_cast<int>(sigma.components().size()); ++j) {
      auto [sign, k] = wedge(rho.degree(), i, sigma.degree(), j);
      if (sign == 0) continue;
      SuperMatrix c = supercommutator(rho.component(static_cast<std::size_t>(i)),
                                      sigma.component(static_cast<std::size_t>(j)));
      if (sign > 0) comps[static_cast<std::size_t>(k)] += c;
      else comps[static_cast<std::size_t>(k)] -= c;
    }
  }
  if (d == 0) return HorizontalForm::zero_form(comps[0]);
  if (d == 1) return HorizontalForm::one_form(comps[0], comps[1]);
  return HorizontalForm::two_form(comps[0]);
}

HorizontalForm dh_form(const EvolutionarySystem& system, const HorizontalForm& rho) {
  auto dx = [&](const GradedPoly& e) { return total_x(system, e); };
  auto dt = [&](const GradedPoly& e) { return total_t(system, e); };
  if (rho.degree() == 0) {
    return HorizontalForm::one_form(rho.component(0).map(dx), rho.component(0).map(dt));
  }
  if (rho.degree() == 1) {
    return HorizontalForm::two_form(rho.component(1).map(dx) - rho.component(0).map(dt));
  }
  throw DegreeError("d_h of a degree-2 form on a two-dimensional base");
}

}  // namespace gzcr
