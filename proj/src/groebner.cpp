#include "dopalg/groebner.hpp"

#include <algorithm>
#include <cstdlib>
#include <cstring>
#include <deque>
#include <string>

#include "dopalg/errors.hpp"

namespace dopalg {

Budget Budget::defaults() {
  Budget b;
  if (const char* env = std::getenv("DOPALG_DEGREE_CAP")) {
    char* end = nullptr;
    long v = std::strtol(env, &end, 10);
    if (end != env && v > 0 && v < 120) b.degree_cap = unsigned(v);
  }
  return b;
}

namespace {

constexpr std::uint64_t kHigh = 0x8080808080808080ULL;

std::uint64_t pack(const Deriv& d) {
  std::uint64_t x;
  std::memcpy(&x, d.e.data(), sizeof x);
  return x;
}

// Bytewise a <= b, valid while every exponent stays below 128.
bool divides_fast(const Deriv& a, const Deriv& b) {
  std::uint64_t x = pack(a), y = pack(b);
  return (((y | kHigh) - x) & kHigh) == kHigh;
}

std::uint64_t packed_le(const Deriv& a) {
  std::uint64_t k = 0;
  for (std::size_t i = kMaxBaseVars; i-- > 0;) k = (k << 8) | a.e[i];
  return k;
}

bool key_greater(const ModTerm& a, const ModTerm& b) { return a.key > b.key; }

bool vec_constant(const ModVec& v) {
  return std::all_of(v.begin(), v.end(), [](const ModTerm& t) { return t.coef.is_constant(); });
}

// Sorts and merges duplicate keys.
ModVec normalize_terms(ModVec v) {
  std::sort(v.begin(), v.end(), key_greater);
  ModVec out;
  out.reserve(v.size());
  for (auto& t : v) {
    if (!out.empty() && out.back().key == t.key) {
      out.back().coef += t.coef;
    } else {
      if (!out.empty() && out.back().coef.is_zero()) out.pop_back();
      out.push_back(std::move(t));
    }
  }
  if (!out.empty() && out.back().coef.is_zero()) out.pop_back();
  return out;
}

}  // namespace

GroebnerBasis::GroebnerBasis(ContextPtr ctx, std::size_t rank, ModTermOrder order, Budget budget)
    : ctx_(std::move(ctx)), rank_(rank), order_(std::move(order)), budget_(std::move(budget)), by_pos_(rank) {
  if (!budget_.usage) budget_.usage = std::make_shared<BudgetUsage>();
  if (budget_.degree_cap > 120) budget_.degree_cap = 120;
}

Key GroebnerBasis::key_of(std::uint32_t pos, const Deriv& mu) const {
  Key blk = Key(255 - order_.block_of(pos));
  Key wd = Key(unsigned(int(mu.order()) + order_.shift_of(pos) + 0x8000) & 0xFFFFu);
  Key rk = Key(revlex_key(mu));
  if (order_.kind == OrderKind::TOP)
    return (blk << 112) | (wd << 96) | (rk << 32) | Key(0xFFFFFFFFu - pos);
  return (blk << 112) | (Key(0xFFFFu - pos) << 96) | (wd << 64) | rk;
}

ModVec GroebnerBasis::to_vec(const Row& r) const {
  if (r.size() != rank_) throw DimensionMismatch("row length does not match the module rank");
  ModVec v;
  for (std::size_t j = 0; j < r.size(); ++j)
    for (const auto& t : r[j].terms()) v.push_back({key_of(std::uint32_t(j), t.mu), t.mu, std::uint32_t(j), t.coef});
  std::sort(v.begin(), v.end(), key_greater);
  return v;
}

Row GroebnerBasis::to_row(const ModVec& v) const {
  std::vector<std::vector<DiffOp::Term>> parts(rank_);
  for (const auto& t : v) parts[t.pos].push_back({t.mu, t.coef});
  Row r(rank_);
  for (std::size_t j = 0; j < rank_; ++j)
    if (!parts[j].empty()) r[j] = DiffOp::from_terms(std::move(parts[j]));
  return r;
}

ModVec GroebnerBasis::mul_left(const Deriv& alpha, const RationalFunction& c, const ModVec& g) const {
  ModVec out;
  if (c.is_zero()) return out;
  unsigned ord = alpha.order();
  bool fast = ord == 0 || vec_constant(g);
  if (fast) {
    out.reserve(g.size());
    Key add, sub;
    if (order_.kind == OrderKind::TOP) {
      add = Key(ord) << 96;
      sub = Key(packed_le(alpha)) << 32;
    } else {
      add = Key(ord) << 64;
      sub = Key(packed_le(alpha));
    }
    bool one = c.is_one();
    for (const auto& t : g) out.push_back({t.key + add - sub, t.mu + alpha, t.pos, one ? t.coef : c * t.coef});
    return out;
  }
  for (const auto& t : g) {
    DiffOp shifted = weyl_shift(alpha, t.coef, t.mu);
    for (const auto& s : shifted.terms())
      out.push_back({key_of(t.pos, s.mu), s.mu, t.pos, c * s.coef});
  }
  return normalize_terms(std::move(out));
}

void GroebnerBasis::tick() const {
  auto& u = *budget_.usage;
  ++u.steps;
  if (budget_.step_cap && u.steps > budget_.step_cap)
    throw ResourceBudgetExceeded("step budget exhausted after " + std::to_string(budget_.step_cap) + " steps");
}

void GroebnerBasis::check_degree(unsigned d) const {
  auto& u = *budget_.usage;
  u.max_degree = std::max(u.max_degree, d);
  if (d > budget_.degree_cap)
    throw ResourceBudgetExceeded("derivative order " + std::to_string(d) + " exceeds the degree cap " +
                                 std::to_string(budget_.degree_cap));
}

int GroebnerBasis::find_reducer(const ModTerm& t) const {
  for (int i : by_pos_[t.pos])
    if (divides_fast(lead(i).mu, t.mu)) return i;
  return -1;
}

// v[from..] - w[1..]; w's leading term cancels against the dropped head of v.
ModVec GroebnerBasis::sub_scaled(const ModVec& v, std::size_t from, const ModVec& w) const {
  ModVec out;
  out.reserve(v.size() - from + w.size());
  std::size_t i = from, j = 1;
  while (i < v.size() || j < w.size()) {
    if (j == w.size() || (i < v.size() && v[i].key > w[j].key)) {
      out.push_back(v[i++]);
    } else if (i == v.size() || w[j].key > v[i].key) {
      out.push_back({w[j].key, w[j].mu, w[j].pos, -w[j].coef});
      ++j;
    } else {
      RationalFunction s = v[i].coef - w[j].coef;
      if (!s.is_zero()) out.push_back({v[i].key, v[i].mu, v[i].pos, std::move(s)});
      ++i;
      ++j;
    }
  }
  return out;
}

ModVec GroebnerBasis::reduce(ModVec v, bool full) const {
  ModVec done;
  std::size_t s = 0;
  while (s < v.size()) {
    const ModTerm& t = v[s];
    int r = find_reducer(t);
    if (r < 0) {
      if (!full) {
        for (; s < v.size(); ++s) done.push_back(std::move(v[s]));
        break;
      }
      done.push_back(std::move(v[s]));
      ++s;
      continue;
    }
    tick();
    ModVec w = mul_left(t.mu - lead(r).mu, t.coef, elems_[std::size_t(r)].v);
    v = sub_scaled(v, s + 1, w);
    s = 0;
  }
  return done;
}

Row GroebnerBasis::reduce(const Row& v) const { return to_row(reduce(to_vec(v), true)); }

bool GroebnerBasis::member(const Row& v) const {
  if (!is_complete()) throw Error("membership query on an incomplete basis");
  return reduce(to_vec(v), false).empty();
}

void GroebnerBasis::make_monic(ModVec& v) const {
  if (v.empty() || v.front().coef.is_one()) return;
  RationalFunction inv = v.front().coef.inverse();
  for (auto& t : v) t.coef *= inv;
}

ModVec GroebnerBasis::spoly(int i, int j) const {
  const ModTerm& a = lead(i);
  const ModTerm& b = lead(j);
  Deriv l = lcm(a.mu, b.mu);
  ModVec x = mul_left(l - a.mu, RationalFunction(1), elems_[std::size_t(i)].v);
  ModVec y = mul_left(l - b.mu, RationalFunction(1), elems_[std::size_t(j)].v);
  return sub_scaled(x, 1, y);
}

void GroebnerBasis::add(const Row& v) { add(to_vec(v)); }

void GroebnerBasis::add(ModVec v) {
  if (v.empty()) return;
  int sugar = wdeg(v.front());
  for (const auto& t : v) {
    sugar = std::max(sugar, wdeg(t));
    check_degree(t.mu.order());
  }
  generators_.push_back(std::move(v));
  queue_.insert({sugar, generators_.back().front().key, -1, int(generators_.size() - 1)});
}

void GroebnerBasis::insert(ModVec h, int sugar) {
  make_monic(h);
  const ModTerm& lh = h.front();
  check_degree(lh.mu.order());
  std::uint32_t pos = lh.pos;
  int k = int(elems_.size());

  // Candidate pairs with the active elements at the same position.
  struct Cand {
    int i;
    Deriv l;
    bool keep = true;
  };
  std::vector<Cand> cands;
  for (int i : by_pos_[pos]) cands.push_back({i, lcm(lead(i).mu, lh.mu)});
  // Chain criterion among the new pairs: drop (i,h) when some (j,h) has a
  // strictly smaller lcm dividing it; among equal lcms keep the first.
  for (std::size_t a = 0; a < cands.size(); ++a) {
    for (std::size_t b = 0; b < cands.size() && cands[a].keep; ++b) {
      if (a == b || !cands[b].keep) continue;
      if (divides_fast(cands[b].l, cands[a].l)) {
        if (!(cands[b].l == cands[a].l) || b < a) cands[a].keep = false;
      }
    }
  }
  // Chain criterion on queued pairs.
  for (auto it = queue_.begin(); it != queue_.end();) {
    const Pending& p = *it;
    if (p.i >= 0 && lead(p.i).pos == pos) {
      Deriv lij = lcm(lead(p.i).mu, lead(p.j).mu);
      if (divides_fast(lh.mu, lij) && !(lcm(lead(p.i).mu, lh.mu) == lij) && !(lcm(lead(p.j).mu, lh.mu) == lij)) {
        it = queue_.erase(it);
        continue;
      }
    }
    ++it;
  }
  int hs = std::max(sugar, wdeg(lh));
  for (const auto& c : cands) {
    if (!c.keep) continue;
    const Elem& e = elems_[std::size_t(c.i)];
    int s1 = e.sugar + int(c.l.order() - lead(c.i).mu.order());
    int s2 = hs + int(c.l.order() - lh.mu.order());
    queue_.insert({std::max(s1, s2), key_of(pos, c.l), c.i, k});
  }
  // Elements whose lead is now redundant leave the active set.
  auto& act = by_pos_[pos];
  for (int i : act)
    if (divides_fast(lh.mu, lead(i).mu)) elems_[std::size_t(i)].active = false;
  act.erase(std::remove_if(act.begin(), act.end(), [&](int i) { return !elems_[std::size_t(i)].active; }),
            act.end());

  Elem e;
  e.constant = vec_constant(h);
  e.sugar = hs;
  e.v = std::move(h);
  elems_.push_back(std::move(e));
  act.push_back(k);

  std::size_t live = 0;
  for (const auto& p : by_pos_) live += p.size();
  auto& u = *budget_.usage;
  u.max_basis = std::max(u.max_basis, live);
  if (elems_.size() > budget_.basis_cap)
    throw ResourceBudgetExceeded("basis size exceeds the cap of " + std::to_string(budget_.basis_cap));
}

void GroebnerBasis::complete(std::optional<int> up_to_sugar) {
  while (!queue_.empty()) {
    Pending p = *queue_.begin();
    if (up_to_sugar && p.sugar > *up_to_sugar) break;
    queue_.erase(queue_.begin());
    tick();
    ModVec h;
    if (p.i < 0) {
      h = generators_[std::size_t(p.j)];
    } else {
      check_degree(lcm(lead(p.i).mu, lead(p.j).mu).order());
      h = spoly(p.i, p.j);
    }
    h = reduce(std::move(h), true);
    if (!h.empty()) insert(std::move(h), p.sugar);
  }
}

void GroebnerBasis::interreduce() {
  if (!is_complete()) throw Error("interreduce on an incomplete basis");
  std::vector<int> act;
  for (const auto& p : by_pos_) act.insert(act.end(), p.begin(), p.end());
  std::sort(act.begin(), act.end());
  std::vector<ModVec> reduced;
  for (int i : act) {
    const ModVec& v = elems_[std::size_t(i)].v;
    ModVec tail(v.begin() + 1, v.end());
    ModVec r = reduce(std::move(tail), true);
    ModVec full;
    full.reserve(r.size() + 1);
    full.push_back(v.front());
    for (auto& t : r) full.push_back(std::move(t));
    reduced.push_back(std::move(full));
  }
  std::vector<Elem> fresh;
  for (auto& p : by_pos_) p.clear();
  for (std::size_t k = 0; k < reduced.size(); ++k) {
    Elem e;
    e.sugar = elems_[std::size_t(act[k])].sugar;
    e.constant = vec_constant(reduced[k]);
    e.v = std::move(reduced[k]);
    by_pos_[e.v.front().pos].push_back(int(k));
    fresh.push_back(std::move(e));
  }
  elems_ = std::move(fresh);
}

std::vector<ModVec> GroebnerBasis::basis() const {
  std::vector<int> act;
  for (const auto& p : by_pos_) act.insert(act.end(), p.begin(), p.end());
  std::sort(act.begin(), act.end());
  std::vector<ModVec> out;
  for (int i : act) out.push_back(elems_[std::size_t(i)].v);
  return out;
}

std::vector<Row> GroebnerBasis::rows() const {
  std::vector<Row> out;
  for (const auto& v : basis()) out.push_back(to_row(v));
  return out;
}

bool GroebnerBasis::verify() const {
  for (const auto& p : by_pos_)
    for (std::size_t a = 0; a < p.size(); ++a)
      for (std::size_t b = a + 1; b < p.size(); ++b)
        if (!reduce(spoly(p[a], p[b]), true).empty()) return false;
  return true;
}

GroebnerBasis buchberger(const OpMatrix& gens, ModTermOrder order, Budget budget) {
  GroebnerBasis g(gens.context(), gens.cols(), std::move(order), std::move(budget));
  for (std::size_t i = 0; i < gens.rows(); ++i) g.add(gens.row(i));
  g.complete();
  g.interreduce();
  return g;
}

Row reduce(const Row& v, const GroebnerBasis& g) { return g.reduce(v); }

// ------------------------------------------------------------- cofactors

namespace {

ModTermOrder augmented_order(std::size_t m, std::size_t k, const std::vector<int>& a_shift,
                             const std::vector<int>& b_shift) {
  ModTermOrder o;
  o.kind = OrderKind::TOP;
  o.block.assign(m + k, 0);
  o.shift.assign(m + k, 0);
  for (std::size_t j = 0; j < m; ++j) o.shift[j] = a_shift.empty() ? 0 : a_shift[j];
  for (std::size_t i = 0; i < k; ++i) {
    o.block[m + i] = 1;
    o.shift[m + i] = b_shift[i];
  }
  return o;
}

GroebnerBasis augmented_basis(const OpMatrix& a, Budget budget) {
  std::size_t m = a.cols(), k = a.rows();
  std::vector<int> a_shift, b_shift(k, 0);
  if (auto gr = detect_grading(a)) {
    a_shift = gr->col_shift;
    b_shift = gr->row_degree;
  } else {
    for (std::size_t i = 0; i < k; ++i) b_shift[i] = std::max(0, a.row_order(i));
  }
  GroebnerBasis gb(a.context(), m + k, augmented_order(m, k, a_shift, b_shift), std::move(budget));
  for (std::size_t i = 0; i < k; ++i) {
    Row r = a.row(i);
    r.resize(m + k);
    r[m + i] = DiffOp(1);
    gb.add(r);
  }
  gb.complete();
  gb.interreduce();
  return gb;
}

}  // namespace

CofactorBasis::CofactorBasis(const OpMatrix& gens, Budget budget)
    : gens_(gens), m_(gens.cols()), gb_(augmented_basis(gens, std::move(budget))) {}

MemberResult CofactorBasis::member(const Row& v) const {
  if (v.size() != m_) throw DimensionMismatch("row length does not match the module rank");
  Row ext = v;
  ext.resize(m_ + gens_.rows());
  ModVec x = gb_.reduce(gb_.to_vec(ext), true);
  MemberResult res;
  bool in_a = std::any_of(x.begin(), x.end(), [&](const ModTerm& t) { return t.pos < m_; });
  if (in_a) {
    ModVec nf;
    for (auto& t : x)
      if (t.pos < m_) nf.push_back(t);
    Row r = gb_.to_row(nf);
    r.resize(m_);
    res.normal_form = std::move(r);
    return res;
  }
  res.is_member = true;
  Row full = gb_.to_row(x);
  res.cofactors.resize(gens_.rows());
  for (std::size_t i = 0; i < gens_.rows(); ++i) res.cofactors[i] = -full[m_ + i];
  return res;
}

MemberResult member(const Row& v, const OpMatrix& gens, Budget budget) {
  return CofactorBasis(gens, std::move(budget)).member(v);
}

bool module_contains(const OpMatrix& a, const OpMatrix& b, Budget budget) {
  if (a.cols() != b.cols()) throw DimensionMismatch("modules live in free modules of different rank");
  if (b.rows() == 0) return true;
  GroebnerBasis g = buchberger(a, {}, std::move(budget));
  for (std::size_t i = 0; i < b.rows(); ++i)
    if (!g.member(b.row(i))) return false;
  return true;
}

bool module_equal(const OpMatrix& a, const OpMatrix& b, Budget budget) {
  return module_contains(a, b, budget) && module_contains(b, a, budget);
}

// --------------------------------------------------------------- gradings

std::optional<Grading> detect_grading(const OpMatrix& a) {
  std::size_t k = a.rows(), m = a.cols(), n = a.ctx().n();
  std::vector<std::optional<int>> rowd(k), cols(m);
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < m; ++j) {
      const DiffOp& e = a.at(i, j);
      if (e.is_zero()) continue;
      if (!e.is_homogeneous()) return std::nullopt;
      for (const auto& t : e.terms())
        if (t.coef.depends_on_range(0, n)) return std::nullopt;
    }
  // Propagate b_i - a_j = ord over the bipartite graph of nonzero entries.
  for (std::size_t start = 0; start < k + m; ++start) {
    bool is_row = start < k;
    if (is_row ? rowd[start].has_value() : cols[start - k].has_value()) continue;
    (is_row ? rowd[start] : cols[start - k]) = 0;
    std::deque<std::size_t> q{start};
    std::vector<std::size_t> comp_cols;
    while (!q.empty()) {
      std::size_t v = q.front();
      q.pop_front();
      if (v < k) {
        for (std::size_t j = 0; j < m; ++j) {
          if (a.at(v, j).is_zero()) continue;
          int want = *rowd[v] - a.at(v, j).order();
          if (!cols[j]) {
            cols[j] = want;
            q.push_back(k + j);
          } else if (*cols[j] != want) {
            return std::nullopt;
          }
        }
      } else {
        std::size_t j = v - k;
        comp_cols.push_back(j);
        for (std::size_t i = 0; i < k; ++i) {
          if (a.at(i, j).is_zero()) continue;
          int want = *cols[j] + a.at(i, j).order();
          if (!rowd[i]) {
            rowd[i] = want;
            q.push_back(i);
          } else if (*rowd[i] != want) {
            return std::nullopt;
          }
        }
      }
    }
  }
  // Shift so that the smallest column weight is zero.
  int lo = 0;
  bool any = false;
  for (auto& c : cols)
    if (!any || *c < lo) lo = *c, any = true;
  Grading g;
  for (auto& c : cols) g.col_shift.push_back(*c - lo);
  for (auto& r : rowd) g.row_degree.push_back(*r - lo);
  return g;
}

std::vector<Row> syzygies(const OpMatrix& a, Budget budget) {
  std::size_t m = a.cols(), k = a.rows();
  if (k == 0) return {};
  GroebnerBasis gb = augmented_basis(a, std::move(budget));
  std::vector<Row> out;
  for (const auto& v : gb.basis()) {
    if (v.front().pos < m) continue;
    Row full = gb.to_row(v);
    out.emplace_back(full.begin() + std::ptrdiff_t(m), full.end());
  }
  return out;
}

Row normalize_row(const Row& r, const ContextPtr& ctx) {
  GroebnerBasis g(ctx, r.size());
  ModVec v = g.to_vec(r);
  if (v.empty() || v.front().coef.is_one()) return r;
  RationalFunction inv = v.front().coef.inverse();
  Row out(r.size());
  for (std::size_t j = 0; j < r.size(); ++j) out[j] = r[j].scaled_left(inv);
  return out;
}

}  // namespace dopalg
