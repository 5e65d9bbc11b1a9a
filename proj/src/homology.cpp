#include "dopalg/homology.hpp"

#include <algorithm>
#include <map>
#include <numeric>

#include "dopalg/errors.hpp"
#include "dopalg/linalg.hpp"

namespace dopalg {

namespace {

std::vector<Row> nonzero_rows(const std::vector<Row>& gens) {
  std::vector<Row> out;
  for (const auto& r : gens)
    if (!row_is_zero(r)) out.push_back(r);
  return out;
}

std::size_t term_count(const Row& r) {
  std::size_t s = 0;
  for (const auto& e : r) s += e.terms().size();
  return s;
}

bool member_of(const GroebnerBasis& g, const Row& r) { return g.reduce(g.to_vec(r), false).empty(); }

}  // namespace

std::vector<Row> minimize(const std::vector<Row>& gens, const ContextPtr& ctx, std::size_t cols,
                          const Budget& budget) {
  std::vector<Row> rows = nonzero_rows(gens);
  if (rows.empty()) return {};
  OpMatrix m(ctx, cols, rows);
  std::vector<std::size_t> idx(rows.size());
  std::iota(idx.begin(), idx.end(), 0);

  if (auto gr = detect_grading(m)) {
    // Degree by degree: a generator is kept iff it is not in the module of
    // the ones kept so far, which for graded modules gives a minimal set.
    std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
      if (gr->row_degree[a] != gr->row_degree[b]) return gr->row_degree[a] < gr->row_degree[b];
      return term_count(rows[a]) < term_count(rows[b]);
    });
    ModTermOrder ord;
    ord.shift = gr->col_shift;
    GroebnerBasis g(ctx, cols, ord, budget);
    std::vector<Row> kept;
    for (auto i : idx) {
      g.complete(gr->row_degree[i]);
      if (member_of(g, rows[i])) continue;
      kept.push_back(rows[i]);
      g.add(rows[i]);
    }
    return kept;
  }

  std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
    int oa = row_order(rows[a]), ob = row_order(rows[b]);
    if (oa != ob) return oa < ob;
    return term_count(rows[a]) < term_count(rows[b]);
  });
  std::vector<Row> kept;
  {
    GroebnerBasis g(ctx, cols, {}, budget);
    for (auto i : idx) {
      g.complete();
      if (member_of(g, rows[i])) continue;
      kept.push_back(rows[i]);
      g.add(rows[i]);
    }
  }
  // Later generators may make earlier ones redundant.
  for (std::size_t k = kept.size(); k-- > 0 && kept.size() > 1;) {
    std::vector<Row> others;
    for (std::size_t j = 0; j < kept.size(); ++j)
      if (j != k) others.push_back(kept[j]);
    GroebnerBasis g = buchberger(OpMatrix(ctx, cols, others), {}, budget);
    if (member_of(g, kept[k])) kept.erase(kept.begin() + std::ptrdiff_t(k));
  }
  return kept;
}

OpMatrix cc(const OpMatrix& d, const Budget& budget, bool minimal) {
  std::vector<Row> syz = syzygies(d, budget);
  std::vector<Row> rows = minimal ? minimize(syz, d.context(), d.rows(), budget) : nonzero_rows(syz);
  for (auto& r : rows) {
    r = normalize_row(r, d.context());
    if (!row_is_zero(row_times(r, d))) throw InternalIdentityViolated("a computed relation does not annihilate D");
  }
  return OpMatrix(d.context(), d.rows(), std::move(rows));
}

std::vector<std::size_t> Resolution::ranks() const {
  std::vector<std::size_t> r;
  for (const auto& s : steps) r.push_back(s.rows());
  return r;
}

std::vector<int> Resolution::orders() const {
  std::vector<int> o;
  for (const auto& s : steps)
    if (s.rows() > 0) o.push_back(s.order());
  return o;
}

Resolution resolve(const OpMatrix& d, int max_steps, const Budget& budget, bool minimal) {
  if (max_steps < 1) throw Error("resolve needs max_steps >= 1");
  Resolution r;
  r.unknowns = d.cols();
  r.steps.push_back(d);
  for (int s = 0; s < max_steps && r.steps.back().rows() > 0; ++s) r.steps.push_back(cc(r.steps.back(), budget, minimal));
  r.terminated = r.steps.back().rows() == 0;
  return r;
}

long euler_characteristic(const Resolution& r, long leading_rank) {
  if (!r.terminated) throw NotTerminated();
  long s = leading_rank;
  long sign = -1;
  for (const auto& st : r.steps) {
    s += sign * long(st.rows());
    sign = -sign;
  }
  return s;
}

DiffOp clear_denominators(const DiffOp& p) {
  if (p.is_zero()) return p;
  Poly l(Rational(1));
  for (const auto& t : p.terms()) {
    Poly den = t.coef.denominator();
    Poly g = gcd(l, den);
    l = *Poly::divide_exact(l * den, g);
  }
  std::vector<DiffOp::Term> terms;
  Poly content;
  for (const auto& t : p.terms()) {
    Poly num = t.coef.numerator() * *Poly::divide_exact(l, t.coef.denominator());
    content = content.is_zero() ? num.monic() : gcd(content, num);
    terms.push_back({t.mu, RationalFunction(num)});
  }
  Poly lead = *Poly::divide_exact(terms.front().coef.numerator(), content);
  Rational lc = lead.leading().coef;
  for (auto& t : terms) t.coef = RationalFunction(Poly::divide_exact(t.coef.numerator(), content)->scaled(1 / lc));
  return DiffOp::from_terms(std::move(terms));
}

std::optional<DiffOp> torsion_annihilator(const Row& t, const OpMatrix& d1, int max_order, const Budget& budget) {
  GroebnerBasis g = buchberger(d1, {}, budget);
  std::size_t n = d1.ctx().n();
  ModVec tv = g.to_vec(t);
  for (int k = 0; k <= max_order; ++k) {
    // All alpha with |alpha| <= k, increasing.
    std::vector<Deriv> alphas{Deriv{}};
    for (int deg = 1; deg <= k; ++deg) {
      std::vector<Deriv> next;
      for (const auto& a : alphas) {
        if (int(a.order()) != deg - 1) continue;
        std::size_t last = 0;
        for (std::size_t v = 0; v < n; ++v)
          if (a.e[v]) last = v;
        for (std::size_t v = last; v < n; ++v) {
          Deriv b = a;
          ++b.e[v];
          next.push_back(b);
        }
      }
      alphas.insert(alphas.end(), next.begin(), next.end());
    }
    std::sort(alphas.begin(), alphas.end(), [](const Deriv& a, const Deriv& b) { return compare_degrevlex(a, b) < 0; });
    std::vector<ModVec> nfs;
    std::map<Key, std::size_t> coord;
    for (const auto& a : alphas) {
      nfs.push_back(g.reduce(g.mul_left(a, RationalFunction(1), tv), true));
      for (const auto& term : nfs.back()) coord.emplace(term.key, coord.size());
    }
    DenseMatrix<RationalFunction> m(coord.size(), alphas.size());
    for (std::size_t c = 0; c < nfs.size(); ++c)
      for (const auto& term : nfs[c]) m(coord[term.key], c) = term.coef;
    auto ker = kernel(m);
    if (ker.empty()) continue;
    std::vector<DiffOp::Term> terms;
    for (std::size_t c = 0; c < alphas.size(); ++c)
      if (!ker.front()[c].is_zero()) terms.push_back({alphas[c], ker.front()[c]});
    return clear_denominators(DiffOp::from_terms(std::move(terms)));
  }
  return std::nullopt;
}

DualityReport duality_test(const OpMatrix& d1, const Budget& budget, int annihilator_cap) {
  DualityReport r;
  r.d1 = d1;
  r.ad_d1 = adjoint_matrix(d1);
  r.ad_d = cc(r.ad_d1, budget);
  r.d = adjoint_matrix(r.ad_d);
  r.d1_prime = cc(r.d, budget);
  if (!(d1 * r.d).is_zero()) throw InternalIdentityViolated("D1 o D != 0 in the duality test");
  GroebnerBasis g = buchberger(d1, {}, budget);
  for (std::size_t i = 0; i < r.d1_prime.rows(); ++i) {
    Row row = r.d1_prime.row(i);
    if (member_of(g, row)) continue;
    TorsionRow t;
    t.row = row;
    t.searched_up_to = annihilator_cap;
    t.annihilator = torsion_annihilator(row, d1, annihilator_cap, budget);
    r.torsion.push_back(std::move(t));
  }
  // D1 lies in D1' always; equality is the absence of new rows.
  r.parametrizable = r.torsion.empty() && module_contains(r.d1_prime, d1, budget);
  return r;
}

bool left_invertible(const OpMatrix& a, const Budget& budget) {
  GroebnerBasis g = buchberger(a, {}, budget);
  for (std::size_t j = 0; j < a.cols(); ++j) {
    Row e(a.cols());
    e[j] = DiffOp(1);
    if (!member_of(g, e)) return false;
  }
  return true;
}

ExtReport ext_zero(const OpMatrix& d, int i, const Budget& budget, bool minimal) {
  if (i < 1) throw Error("ext index must be >= 1");
  std::vector<OpMatrix> ds{d};
  while (int(ds.size()) < i + 1) ds.push_back(cc(ds.back(), budget, minimal));
  ExtReport rep;
  rep.index = i;
  rep.kernel_gens = cc(adjoint_matrix(ds[std::size_t(i)]), budget);
  rep.image_gens = adjoint_matrix(ds[std::size_t(i - 1)]);
  GroebnerBasis g = buchberger(rep.image_gens, {}, budget);
  for (std::size_t k = 0; k < rep.kernel_gens.rows(); ++k) {
    Row r = rep.kernel_gens.row(k);
    if (!member_of(g, r)) {
      rep.is_zero = false;
      rep.witness = r;
      break;
    }
  }
  return rep;
}

ParametrizationCheck verify_parametrization(const OpMatrix& d1, const OpMatrix& d, const Budget& budget) {
  ParametrizationCheck c;
  if (d1.cols() != d.rows()) throw DimensionMismatch("parametrization shape does not match");
  c.composes_to_zero = (d1 * d).is_zero();
  c.generates_all_cc = module_equal(cc(d, budget), d1, budget);
  return c;
}

bool image_equal(const OpMatrix& a, const OpMatrix& b, const Budget& budget) {
  if (a.rows() != b.rows()) throw DimensionMismatch("images live in spaces of different rank");
  return module_equal(adjoint_matrix(a), adjoint_matrix(b), budget);
}

}  // namespace dopalg
