#include "graded_oracle.hpp"

#include <array>
#include <map>
#include <queue>

namespace oracle {

namespace {

using Mono = std::array<int, dopalg::kMaxBaseVars>;
using CPoly = std::map<Mono, mpq_class>;

int degree(const Mono& m) {
  int s = 0;
  for (int e : m) s += e;
  return s;
}

Mono plus(const Mono& a, const Mono& b) {
  Mono r;
  for (std::size_t i = 0; i < r.size(); ++i) r[i] = a[i] + b[i];
  return r;
}

std::optional<CPoly> to_cpoly(const dopalg::DiffOp& p) {
  CPoly out;
  for (const auto& t : p.terms()) {
    if (!t.coef.is_constant()) return std::nullopt;
    Mono m;
    for (std::size_t i = 0; i < m.size(); ++i) m[i] = t.mu.e[i];
    out[m] += t.coef.constant();
  }
  return out;
}

std::optional<int> homogeneous_degree(const CPoly& p) {
  std::optional<int> d;
  for (const auto& [m, c] : p) {
    if (d && *d != degree(m)) return std::nullopt;
    d = degree(m);
  }
  return d;
}

void monomials_rec(std::size_t n, std::size_t var, int left, Mono& cur, std::vector<Mono>& out) {
  if (var + 1 == n) {
    cur[var] = left;
    out.push_back(cur);
    cur[var] = 0;
    return;
  }
  for (int k = left; k >= 0; --k) {
    cur[var] = k;
    monomials_rec(n, var + 1, left - k, cur, out);
  }
  cur[var] = 0;
}

std::vector<Mono> monomials(std::size_t n, int deg) {
  std::vector<Mono> out;
  if (deg < 0) return out;
  Mono cur{};
  monomials_rec(n, 0, deg, cur, out);
  return out;
}

// Coordinates (slot, monomial) -> dense index, assigned on first use.
class Coords {
 public:
  std::size_t at(std::size_t slot, const Mono& m) {
    auto [it, fresh] = idx_.try_emplace({slot, m}, idx_.size());
    return it->second;
  }

 private:
  std::map<std::pair<std::size_t, Mono>, std::size_t> idx_;
};

using SVec = std::map<std::size_t, mpq_class>;

// Row echelon form built one vector at a time; every stored row has its
// lead as smallest index.
class Echelon {
 public:
  bool insert(SVec v) {
    for (auto it = v.begin(); it != v.end();) {
      auto p = rows_.find(it->first);
      if (p == rows_.end()) {
        ++it;
        continue;
      }
      mpq_class f = it->second;
      std::size_t lead = it->first;
      for (const auto& [k, c] : p->second) {
        mpq_class& slot = v[k];
        slot -= f * c;
      }
      // Drop zeros, then resume after the eliminated lead.
      for (auto z = v.begin(); z != v.end();) z = sgn(z->second) == 0 ? v.erase(z) : std::next(z);
      it = v.upper_bound(lead);
    }
    if (v.empty()) return false;
    mpq_class lead = v.begin()->second;
    for (auto& [k, c] : v) c /= lead;
    rows_.emplace(v.begin()->first, std::move(v));
    return true;
  }
  std::size_t rank() const { return rows_.size(); }

 private:
  std::map<std::size_t, SVec> rows_;
};

}  // namespace

bool OracleResult::agrees() const {
  if (!applicable || !annihilates) return false;
  for (const auto& d : degrees)
    if (d.relations != d.generated) return false;
  return true;
}

OracleResult compare_cc(const dopalg::OpMatrix& d, const dopalg::OpMatrix& c, int extra) {
  OracleResult res;
  const std::size_t p = d.rows(), m = d.cols(), n = d.ctx().n();
  if (c.cols() != p) {
    res.reason = "shape mismatch";
    return res;
  }
  std::vector<std::vector<CPoly>> D(p, std::vector<CPoly>(m)), C(c.rows(), std::vector<CPoly>(p));
  for (std::size_t i = 0; i < p; ++i)
    for (std::size_t j = 0; j < m; ++j) {
      auto q = to_cpoly(d.at(i, j));
      if (!q) {
        res.reason = "variable coefficients";
        return res;
      }
      D[i][j] = std::move(*q);
    }
  for (std::size_t k = 0; k < c.rows(); ++k)
    for (std::size_t i = 0; i < p; ++i) {
      auto q = to_cpoly(c.at(k, i));
      if (!q) {
        res.reason = "variable coefficients in the relations";
        return res;
      }
      C[k][i] = std::move(*q);
    }

  // Grading: deg D_ij = b_i - a_j, found by walking the row/column graph.
  std::vector<std::optional<int>> b(p), a(m);
  for (std::size_t start = 0; start < p; ++start) {
    if (b[start]) continue;
    b[start] = 0;
    std::queue<std::pair<bool, std::size_t>> todo;  // (is_row, index)
    todo.push({true, start});
    while (!todo.empty()) {
      auto [is_row, x] = todo.front();
      todo.pop();
      for (std::size_t y = 0; y < (is_row ? m : p); ++y) {
        const CPoly& e = is_row ? D[x][y] : D[y][x];
        if (e.empty()) continue;
        auto hd = homogeneous_degree(e);
        if (!hd) {
          res.reason = "inhomogeneous entry";
          return res;
        }
        if (is_row) {
          int want = *b[x] - *hd;
          if (!a[y]) {
            a[y] = want;
            todo.push({false, y});
          } else if (*a[y] != want) {
            res.reason = "no consistent grading";
            return res;
          }
        } else {
          int want = *a[x] + *hd;
          if (!b[y]) {
            b[y] = want;
            todo.push({true, y});
          } else if (*b[y] != want) {
            res.reason = "no consistent grading";
            return res;
          }
        }
      }
    }
  }
  for (auto& x : a)
    if (!x) x = 0;

  std::vector<int> cdeg(c.rows());
  int top = 0;
  for (std::size_t i = 0; i < p; ++i) top = std::max(top, *b[i]);
  for (std::size_t k = 0; k < c.rows(); ++k) {
    std::optional<int> dk;
    for (std::size_t i = 0; i < p; ++i) {
      if (C[k][i].empty()) continue;
      auto hd = homogeneous_degree(C[k][i]);
      if (!hd || (dk && *dk != *hd + *b[i])) {
        res.reason = "relation row is not homogeneous";
        return res;
      }
      dk = *hd + *b[i];
    }
    cdeg[k] = dk.value_or(0);
    top = std::max(top, cdeg[k]);
  }
  res.applicable = true;

  // C D = 0 as commutative products.
  res.annihilates = true;
  for (std::size_t k = 0; k < c.rows() && res.annihilates; ++k)
    for (std::size_t j = 0; j < m && res.annihilates; ++j) {
      CPoly acc;
      for (std::size_t i = 0; i < p; ++i)
        for (const auto& [m1, c1] : C[k][i])
          for (const auto& [m2, c2] : D[i][j]) acc[plus(m1, m2)] += c1 * c2;
      for (const auto& [mono, coef] : acc)
        if (sgn(coef) != 0) res.annihilates = false;
    }

  int lo = *b[0];
  for (std::size_t i = 0; i < p; ++i) lo = std::min(lo, *b[i]);
  for (int t = lo; t <= top + extra; ++t) {
    DegreeCount dc;
    dc.degree = t;
    Coords out_coords, l_coords;
    Echelon image;
    std::size_t unknowns = 0;
    for (std::size_t i = 0; i < p; ++i)
      for (const auto& mu : monomials(n, t - *b[i])) {
        ++unknowns;
        SVec v;
        for (std::size_t j = 0; j < m; ++j)
          for (const auto& [mono, coef] : D[i][j]) v[out_coords.at(j, plus(mu, mono))] += coef;
        for (auto z = v.begin(); z != v.end();) z = sgn(z->second) == 0 ? v.erase(z) : std::next(z);
        image.insert(std::move(v));
      }
    dc.relations = unknowns - image.rank();
    Echelon gens;
    for (std::size_t k = 0; k < c.rows(); ++k)
      for (const auto& alpha : monomials(n, t - cdeg[k])) {
        SVec v;
        for (std::size_t i = 0; i < p; ++i)
          for (const auto& [mono, coef] : C[k][i]) v[l_coords.at(i, plus(alpha, mono))] += coef;
        for (auto z = v.begin(); z != v.end();) z = sgn(z->second) == 0 ? v.erase(z) : std::next(z);
        gens.insert(std::move(v));
      }
    dc.generated = gens.rank();
    res.degrees.push_back(dc);
  }
  return res;
}

}  // namespace oracle
