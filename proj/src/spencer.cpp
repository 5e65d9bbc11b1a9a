#include "dopalg/spencer.hpp"

#include <bit>
#include <cstring>

#include "dopalg/catalog.hpp"
#include "dopalg/errors.hpp"

namespace dopalg {

namespace {

std::uint64_t pack_deriv(const Deriv& d) {
  std::uint64_t x;
  std::memcpy(&x, d.e.data(), sizeof x);
  return x;
}

struct MonoTable {
  std::vector<Deriv> list;
  std::map<std::uint64_t, std::size_t> index;

  MonoTable(std::size_t n, std::size_t q) : list(multi_indices(n, q)) {
    for (std::size_t i = 0; i < list.size(); ++i) index.emplace(pack_deriv(list[i]), i);
  }
  std::size_t at(const Deriv& d) const { return index.at(pack_deriv(d)); }
};

struct Subsets {
  std::vector<std::vector<std::uint32_t>> by_size;
  std::map<std::uint32_t, std::size_t> index;

  explicit Subsets(std::size_t n) : by_size(n + 1) {
    for (std::uint32_t m = 0; m < (1u << n); ++m) {
      auto s = std::size_t(std::popcount(m));
      index.emplace(m, by_size[s].size());
      by_size[s].push_back(m);
    }
  }
};

using Sparse = std::map<std::size_t, Rational>;

// delta(dx^I (x) w) for w over S_q (x) T coordinates; the result is over
// Lambda^{|I|+1} (x) S_{q-1} (x) T.
void delta_add(std::size_t n, const MonoTable& src, const MonoTable& dst, const Subsets& subs, std::uint32_t mask,
               const Sparse& w, Sparse& out) {
  std::size_t block = dst.list.size() * n;
  for (const auto& [c, val] : w) {
    const Deriv& mu = src.list[c / n];
    std::size_t k = c % n;
    for (std::size_t i = 0; i < n; ++i) {
      if (!mu.e[i] || (mask >> i) & 1u) continue;
      Deriv nu = mu;
      --nu.e[i];
      std::uint32_t j = mask | (1u << i);
      bool neg = std::popcount(mask & ((1u << i) - 1u)) % 2 == 1;
      std::size_t idx = subs.index.at(j) * block + dst.at(nu) * n + k;
      Rational& slot = out[idx];
      if (neg) slot -= val;
      else slot += val;
    }
  }
  for (auto it = out.begin(); it != out.end();) it = sgn(it->second) == 0 ? out.erase(it) : std::next(it);
}

std::size_t sparse_rank(const std::vector<Sparse>& cols) {
  std::map<std::size_t, std::size_t> row_of;
  for (const auto& c : cols)
    for (const auto& [r, v] : c) row_of.emplace(r, row_of.size());
  DenseMatrix<Rational> m(row_of.size(), cols.size());
  for (std::size_t j = 0; j < cols.size(); ++j)
    for (const auto& [r, v] : cols[j]) m(row_of[r], j) = v;
  return rank(std::move(m));
}

Sparse to_sparse(const std::vector<Rational>& v) {
  Sparse s;
  for (std::size_t i = 0; i < v.size(); ++i)
    if (sgn(v[i]) != 0) s.emplace(i, v[i]);
  return s;
}

// Images of Lambda^s (x) (basis of a space inside S_q (x) T).
std::vector<Sparse> delta_images(std::size_t n, std::size_t q, std::size_t s,
                                 const std::vector<std::vector<Rational>>& basis, const Subsets& subs) {
  std::vector<Sparse> out;
  if (q == 0 || s >= n) {
    out.resize(subs.by_size[std::min(s, n)].size() * basis.size());
    return out;
  }
  MonoTable src(n, q), dst(n, q - 1);
  for (auto mask : subs.by_size[s])
    for (const auto& b : basis) {
      Sparse img;
      delta_add(n, src, dst, subs, mask, to_sparse(b), img);
      out.push_back(std::move(img));
    }
  return out;
}

}  // namespace

std::size_t binomial(std::size_t n, std::size_t k) {
  if (k > n) return 0;
  std::size_t r = 1;
  for (std::size_t i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

std::vector<Deriv> multi_indices(std::size_t n, std::size_t q) {
  std::vector<Deriv> out;
  Deriv cur;
  // Lexicographic with the first variable most significant.
  auto rec = [&](auto&& self, std::size_t var, std::size_t left) -> void {
    if (var + 1 == n) {
      cur.e[var] = std::uint8_t(left);
      out.push_back(cur);
      cur.e[var] = 0;
      return;
    }
    for (std::size_t k = left + 1; k-- > 0;) {
      cur.e[var] = std::uint8_t(k);
      self(self, var + 1, left - k);
    }
    cur.e[var] = 0;
  };
  if (n == 0) return out;
  rec(rec, 0, q);
  return out;
}

SymbolSpace::SymbolSpace(std::size_t n, std::size_t q, DenseMatrix<Rational> constraints)
    : n_(n), q_(q), monomials_(multi_indices(n, q)) {
  if (n == 0 || n > kMaxBaseVars) throw UnsupportedDimension("symbol dimension out of range");
  for (std::size_t i = 0; i < monomials_.size(); ++i) index_.emplace(pack_deriv(monomials_[i]), i);
  if (constraints.cols != coords()) throw DimensionMismatch("constraint width does not match the symbol coordinates");
  auto piv = rref(constraints);
  constraints_ = DenseMatrix<Rational>(piv.size(), coords());
  for (std::size_t r = 0; r < piv.size(); ++r)
    for (std::size_t c = 0; c < coords(); ++c) constraints_(r, c) = constraints(r, c);
  basis_ = kernel(constraints_);
}

std::size_t SymbolSpace::monomial_index(const Deriv& mu) const { return index_.at(pack_deriv(mu)); }

SymbolSpace full_symbol(std::size_t n, std::size_t q) {
  return SymbolSpace(n, q, DenseMatrix<Rational>(0, binomial(n + q - 1, q) * n));
}

SymbolSpace killing_symbol(const MetricSpec& m) {
  m.validate();
  std::size_t n = m.n;
  auto pairs = sym_pairs(n);
  DenseMatrix<Rational> c(pairs.size(), n * n);
  MonoTable t(n, 1);
  for (std::size_t r = 0; r < pairs.size(); ++r) {
    auto [i, j] = pairs[r];
    // s_j v^j_i + s_i v^i_j = 0
    c(r, t.at(Deriv::unit(i)) * n + j) += m.signature[j];
    c(r, t.at(Deriv::unit(j)) * n + i) += m.signature[i];
  }
  return SymbolSpace(n, 1, std::move(c));
}

SymbolSpace conformal_symbol(const MetricSpec& m) {
  m.validate();
  std::size_t n = m.n;
  MonoTable t(n, 1);
  std::vector<std::vector<Rational>> rows;
  for (auto [i, j] : sym_pairs(n)) {
    std::vector<Rational> r(n * n);
    if (i != j) {
      r[t.at(Deriv::unit(i)) * n + j] += m.signature[j];
      r[t.at(Deriv::unit(j)) * n + i] += m.signature[i];
    } else {
      // v^i_i - (1/n) sum_r v^r_r = 0
      r[t.at(Deriv::unit(i)) * n + i] += 1;
      for (std::size_t k = 0; k < n; ++k) r[t.at(Deriv::unit(k)) * n + k] -= Rational(1, long(n));
    }
    rows.push_back(std::move(r));
  }
  DenseMatrix<Rational> c(rows.size(), n * n);
  for (std::size_t r = 0; r < rows.size(); ++r)
    for (std::size_t k = 0; k < n * n; ++k) c(r, k) = rows[r][k];
  return SymbolSpace(n, 1, std::move(c));
}

SymbolSpace symbol_of(const OpMatrix& d) {
  std::size_t n = d.ctx().n();
  if (d.cols() != n) throw DimensionMismatch("symbols need as many unknowns as variables");
  int q = d.order();
  if (q < 1) throw Error("the system has no derivatives");
  MonoTable t(n, std::size_t(q));
  DenseMatrix<Rational> c(d.rows(), t.list.size() * n);
  for (std::size_t i = 0; i < d.rows(); ++i) {
    if (row_is_zero(d.row(i))) continue;
    if (d.row_order(i) != q) throw Error("symbols of mixed-order systems are not supported");
    for (std::size_t j = 0; j < n; ++j)
      for (const auto& term : d.at(i, j).terms()) {
        if (int(term.mu.order()) != q) continue;
        if (!term.coef.is_constant()) throw Error("symbols need constant rational coefficients");
        c(i, t.at(term.mu) * n + j) += term.coef.constant();
      }
  }
  return SymbolSpace(n, std::size_t(q), std::move(c));
}

SymbolSpace prolong(const SymbolSpace& g) {
  std::size_t n = g.n(), q = g.q();
  MonoTable hi(n, q + 1);
  const auto& c = g.constraints();
  DenseMatrix<Rational> out(c.rows * n, hi.list.size() * n);
  for (std::size_t r = 0; r < c.rows; ++r)
    for (std::size_t l = 0; l < n; ++l)
      for (std::size_t col = 0; col < c.cols; ++col) {
        if (sgn(c(r, col)) == 0) continue;
        Deriv mu = g.monomials()[col / n] + Deriv::unit(l);
        out(r * n + l, hi.at(mu) * n + col % n) = c(r, col);
      }
  return SymbolSpace(n, q + 1, std::move(out));
}

DeltaComplexReport delta_complex(const SymbolSpace& g, std::size_t s_max) {
  std::size_t n = g.n(), q = g.q();
  if (s_max > n) throw Error("delta complex degree exceeds the dimension");
  Subsets subs(n);
  SymbolSpace up = prolong(g);
  DeltaComplexReport rep;
  rep.n = n;
  rep.q = q;
  for (std::size_t s = 0; s <= s_max; ++s) {
    std::size_t dim = binomial(n, s) * g.dim();
    std::size_t out = s < n ? sparse_rank(delta_images(n, q, s, g.basis(), subs)) : 0;
    std::size_t in = s > 0 ? sparse_rank(delta_images(n, q + 1, s - 1, up.basis(), subs)) : 0;
    rep.dims.push_back(dim);
    rep.rank_out.push_back(out);
    rep.rank_in.push_back(in);
    if (dim < out + in) throw InternalIdentityViolated("negative delta cohomology");
    rep.cohomology.push_back(dim - out - in);
  }
  // delta o delta = 0 on the ambient spaces Lambda^{s-1} (x) S_{q+1} (x) T.
  rep.delta_squared_zero = true;
  if (q >= 1) {
    MonoTable a(n, q + 1), b(n, q), c(n, q - 1);
    for (std::size_t s = 1; s + 1 <= n && s <= s_max; ++s) {
      for (auto mask : subs.by_size[s - 1])
        for (std::size_t col = 0; col < a.list.size() * n; ++col) {
          Sparse first, second;
          delta_add(n, a, b, subs, mask, Sparse{{col, Rational(1)}}, first);
          // Split the image by its exterior part before applying delta again.
          std::map<std::uint32_t, Sparse> parts;
          std::size_t block = b.list.size() * n;
          for (const auto& [idx, v] : first) parts[subs.by_size[s][idx / block]].emplace(idx % block, v);
          for (const auto& [m2, w] : parts) delta_add(n, b, c, subs, m2, w, second);
          if (!second.empty()) rep.delta_squared_zero = false;
        }
    }
  }
  return rep;
}

LanczosSpace lanczos_space(std::size_t n) {
  if (n < 2 || n > kMaxBaseVars) throw UnsupportedDimension("Lanczos space needs 2 <= n <= 8");
  // Coordinates L_{ij,k}, i < j; L_{ji,k} = -L_{ij,k}, L_{ii,k} = 0.
  auto coord = [&](std::size_t i, std::size_t j, std::size_t k) -> std::pair<long, std::size_t> {
    if (i == j) return {0, 0};
    long sign = i < j ? 1 : -1;
    std::size_t a = std::min(i, j), b = std::max(i, j);
    std::size_t pair = 0;
    for (std::size_t x = 0; x < a; ++x) pair += n - 1 - x;
    pair += b - a - 1;
    return {sign, pair * n + k};
  };
  LanczosSpace ls;
  ls.ambient = binomial(n, 2) * n;
  std::vector<std::vector<Rational>> rows;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t k = 0; k < n; ++k) {
        std::vector<Rational> r(ls.ambient);
        bool any = false;
        for (auto [a, b, c] : {std::array{i, j, k}, std::array{j, k, i}, std::array{k, i, j}}) {
          auto [sign, idx] = coord(a, b, c);
          if (sign == 0) continue;
          r[idx] += sign;
          any = true;
        }
        if (any) rows.push_back(std::move(r));
      }
  ls.constraints = DenseMatrix<Rational>(rows.size(), ls.ambient);
  for (std::size_t r = 0; r < rows.size(); ++r)
    for (std::size_t c = 0; c < ls.ambient; ++c) ls.constraints(r, c) = rows[r][c];
  ls.rank = rank(ls.constraints);
  ls.dim = ls.ambient - ls.rank;
  return ls;
}

}  // namespace dopalg
