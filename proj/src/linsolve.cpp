#include "gzcr/linsolve.hpp"

#include <algorithm>
#include <numeric>
#include <optional>
#include <stdexcept>

namespace gzcr {

void LinearSystem::add(LinearEquation eq) {
  for (std::size_t k = 0; k < eq.coefficients.size(); ++k) {
    if (eq.coefficients[k].first >= columns_) throw std::out_of_range("column out of range");
    if (k && eq.coefficients[k - 1].first >= eq.coefficients[k].first) {
      throw std::invalid_argument("equation columns not strictly ascending");
    }
  }
  equations_.push_back(std::move(eq));
}

namespace {

// a -= f * b
void axpy(SparseVector& a, const GaussianRational& f, const SparseVector& b) {
  SparseVector out;
  out.reserve(a.size() + b.size());
  std::size_t i = 0, j = 0;
  while (i < a.size() || j < b.size()) {
    if (j == b.size() || (i < a.size() && a[i].first < b[j].first)) {
      out.push_back(std::move(a[i++]));
    } else if (i == a.size() || b[j].first < a[i].first) {
      out.emplace_back(b[j].first, -(f * b[j].second));
      ++j;
    } else {
      GaussianRational v = a[i].second - f * b[j].second;
      if (!v.is_zero()) out.emplace_back(a[i].first, std::move(v));
      ++i;
      ++j;
    }
  }
  a = std::move(out);
}

struct WorkRow {
  SparseVector coef;
  GaussianRational rhs;
  SparseVector origin;  // combination of original equations (tracked only on demand)
};

struct Echelon {
  std::vector<std::optional<WorkRow>> pivot;  // by leading column
  std::vector<std::size_t> pivot_order;       // equation index that created each pivot, in order
  std::optional<std::size_t> failed;          // equation whose reduction gave 0 = c
  std::optional<WorkRow> failed_row;
};

// Reduces equations in the given order; stops at the first contradiction.
Echelon eliminate(const LinearSystem& sys, const std::vector<std::size_t>& order, bool track) {
  Echelon e;
  e.pivot.resize(sys.columns());
  for (std::size_t idx : order) {
    const LinearEquation& eq = sys.equations()[idx];
    WorkRow row{eq.coefficients, eq.rhs, {}};
    if (track) row.origin = {{idx, GaussianRational(1)}};
    while (!row.coef.empty()) {
      std::size_t lead = row.coef.front().first;
      const auto& p = e.pivot[lead];
      if (!p) break;
      GaussianRational f = row.coef.front().second;
      axpy(row.coef, f, p->coef);
      row.rhs -= f * p->rhs;
      if (track) axpy(row.origin, f, p->origin);
    }
    if (row.coef.empty()) {
      if (!row.rhs.is_zero()) {
        e.failed = idx;
        e.failed_row = std::move(row);
        return e;
      }
      continue;
    }
    GaussianRational inv = row.coef.front().second.inverse();
    for (auto& [c, v] : row.coef) v *= inv;
    row.rhs *= inv;
    if (track) {
      for (auto& [c, v] : row.origin) v *= inv;
    }
    std::size_t lead = row.coef.front().first;
    e.pivot[lead] = std::move(row);
    e.pivot_order.push_back(idx);
  }
  return e;
}

}  // namespace

std::variant<LinearSolution, Inconsistency> solve(const LinearSystem& sys) {
  std::vector<std::size_t> order(sys.equations().size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return sys.equations()[a].coefficients.size() < sys.equations()[b].coefficients.size();
  });

  Echelon e = eliminate(sys, order, false);
  if (e.failed) {
    // replay only the rows that mattered, now tracking combinations
    std::vector<std::size_t> replay = e.pivot_order;
    replay.push_back(*e.failed);
    Echelon t = eliminate(sys, replay, true);
    if (!t.failed || *t.failed != *e.failed) throw std::logic_error("certificate replay diverged");
    SparseVector mult = t.failed_row->origin;
    return Inconsistency{std::move(mult), t.failed_row->rhs};
  }

  // back substitution to reduced echelon form, highest pivot first
  std::size_t n = sys.columns();
  for (std::size_t c = n; c-- > 0;) {
    if (!e.pivot[c]) continue;
    WorkRow& row = *e.pivot[c];
    for (;;) {
      auto it = std::find_if(row.coef.begin() + 1, row.coef.end(),
                             [&](const auto& entry) { return e.pivot[entry.first].has_value(); });
      if (it == row.coef.end()) break;
      std::size_t col = it->first;
      GaussianRational f = it->second;
      axpy(row.coef, f, e.pivot[col]->coef);
      row.rhs -= f * e.pivot[col]->rhs;
    }
  }

  LinearSolution sol;
  sol.particular.assign(n, GaussianRational());
  std::vector<long> free_index(n, -1);
  for (std::size_t c = 0; c < n; ++c) {
    if (e.pivot[c]) {
      sol.particular[c] = e.pivot[c]->rhs;
    } else {
      free_index[c] = static_cast<long>(sol.free_columns.size());
      sol.free_columns.push_back(c);
      sol.kernel.push_back({{c, GaussianRational(1)}});
    }
  }
  for (std::size_t c = 0; c < n; ++c) {
    if (!e.pivot[c]) continue;
    for (std::size_t k = 1; k < e.pivot[c]->coef.size(); ++k) {
      const auto& [col, v] = e.pivot[c]->coef[k];
      sol.kernel[static_cast<std::size_t>(free_index[col])].emplace_back(c, -v);
    }
  }
  for (auto& k : sol.kernel) std::sort(k.begin(), k.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  return sol;
}

bool verify_inconsistency(const LinearSystem& sys, const Inconsistency& cert) {
  std::map<std::size_t, GaussianRational> acc;
  GaussianRational rhs;
  for (const auto& [r, y] : cert.multipliers) {
    if (r >= sys.equations().size()) return false;
    const LinearEquation& eq = sys.equations()[r];
    for (const auto& [c, a] : eq.coefficients) acc[c] += y * a;
    rhs += y * eq.rhs;
  }
  for (const auto& [c, v] : acc) {
    if (!v.is_zero()) return false;
  }
  return !rhs.is_zero() && rhs == cert.value;
}

bool satisfies(const LinearSystem& sys, const std::vector<GaussianRational>& x) {
  for (const auto& eq : sys.equations()) {
    GaussianRational s;
    for (const auto& [c, a] : eq.coefficients) s += a * x.at(c);
    if (!(s == eq.rhs)) return false;
  }
  return true;
}

void AffineAssembler::set_constant(const std::vector<GradedPoly>& constant) {
  if (constant.size() != components_) throw std::invalid_argument("component count mismatch");
  for (std::size_t i = 0; i < constant.size(); ++i) {
    for (const auto& [m, c] : constant[i].terms()) rows_[{i, m}].rhs = -c;
  }
}

void AffineAssembler::add_column(std::size_t k, const std::vector<GradedPoly>& contribution) {
  if (contribution.size() != components_) throw std::invalid_argument("component count mismatch");
  if (k >= unknowns_) throw std::out_of_range("unknown index");
  for (std::size_t i = 0; i < contribution.size(); ++i) {
    for (const auto& [m, c] : contribution[i].terms()) {
      auto& row = rows_[{i, m}];
      if (!row.coefficients.empty() && row.coefficients.back().first >= k) {
        throw std::invalid_argument("columns must be added in ascending order");
      }
      row.coefficients.emplace_back(k, c);
    }
  }
}

std::pair<LinearSystem, std::vector<AffineAssembler::Key>> AffineAssembler::build() const {
  LinearSystem sys(unknowns_);
  std::vector<Key> keys;
  for (const auto& [key, row] : rows_) {
    sys.add(row);
    keys.push_back(key);
  }
  return {std::move(sys), std::move(keys)};
}

}  // namespace gzcr
