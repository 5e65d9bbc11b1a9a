#include "dopalg/ops.hpp"

#include <algorithm>
#include <sstream>

#include "dopalg/errors.hpp"

namespace dopalg {

// --------------------------------------------------------------------- Deriv

Deriv Deriv::unit(std::size_t var) {
  if (var >= kMaxBaseVars) throw Error("derivative index out of range");
  Deriv d;
  d.e[var] = 1;
  return d;
}

unsigned Deriv::order() const {
  unsigned s = 0;
  for (auto v : e) s += v;
  return s;
}

Deriv operator+(const Deriv& a, const Deriv& b) {
  Deriv r;
  for (std::size_t i = 0; i < kMaxBaseVars; ++i) {
    unsigned s = unsigned(a.e[i]) + b.e[i];
    if (s > 120) throw ResourceBudgetExceeded("derivative order overflow");
    r.e[i] = std::uint8_t(s);
  }
  return r;
}

Deriv operator-(const Deriv& a, const Deriv& b) {
  Deriv r;
  for (std::size_t i = 0; i < kMaxBaseVars; ++i) r.e[i] = std::uint8_t(a.e[i] - b.e[i]);
  return r;
}

bool divides(const Deriv& a, const Deriv& b) {
  for (std::size_t i = 0; i < kMaxBaseVars; ++i)
    if (a.e[i] > b.e[i]) return false;
  return true;
}

Deriv lcm(const Deriv& a, const Deriv& b) {
  Deriv r;
  for (std::size_t i = 0; i < kMaxBaseVars; ++i) r.e[i] = std::max(a.e[i], b.e[i]);
  return r;
}

int compare_degrevlex(const Deriv& a, const Deriv& b) {
  unsigned da = a.order(), db = b.order();
  if (da != db) return da > db ? 1 : -1;
  for (std::size_t i = kMaxBaseVars; i-- > 0;) {
    if (a.e[i] != b.e[i]) return a.e[i] < b.e[i] ? 1 : -1;
  }
  return 0;
}

std::uint64_t revlex_key(const Deriv& a) {
  std::uint64_t k = 0;
  for (std::size_t i = kMaxBaseVars; i-- > 0;) k = (k << 8) | std::uint64_t(255 - a.e[i]);
  return k;
}

// -------------------------------------------------------------------- DiffOp

namespace {

bool term_greater(const DiffOp::Term& a, const DiffOp::Term& b) { return compare_degrevlex(a.mu, b.mu) > 0; }

std::vector<DiffOp::Term> merge_ops(const std::vector<DiffOp::Term>& a, const std::vector<DiffOp::Term>& b,
                                    bool subtract) {
  std::vector<DiffOp::Term> out;
  out.reserve(a.size() + b.size());
  std::size_t i = 0, j = 0;
  while (i < a.size() || j < b.size()) {
    int c = i == a.size() ? -1 : j == b.size() ? 1 : compare_degrevlex(a[i].mu, b[j].mu);
    if (c > 0) {
      out.push_back(a[i++]);
    } else if (c < 0) {
      out.push_back({b[j].mu, subtract ? -b[j].coef : b[j].coef});
      ++j;
    } else {
      RationalFunction s = subtract ? a[i].coef - b[j].coef : a[i].coef + b[j].coef;
      if (!s.is_zero()) out.push_back({a[i].mu, std::move(s)});
      ++i;
      ++j;
    }
  }
  return out;
}

}  // namespace

DiffOp::DiffOp(RationalFunction c) {
  if (!c.is_zero()) terms_.push_back({Deriv{}, std::move(c)});
}

DiffOp DiffOp::monomial(const Deriv& mu, RationalFunction c) {
  DiffOp r;
  if (!c.is_zero()) r.terms_.push_back({mu, std::move(c)});
  return r;
}

DiffOp DiffOp::from_terms(std::vector<Term> terms) {
  std::sort(terms.begin(), terms.end(), term_greater);
  DiffOp r;
  std::vector<RationalFunction> group;
  for (std::size_t i = 0; i < terms.size();) {
    std::size_t j = i + 1;
    while (j < terms.size() && terms[j].mu == terms[i].mu) ++j;
    RationalFunction c;
    if (j == i + 1) {
      c = std::move(terms[i].coef);
    } else {
      group.clear();
      for (std::size_t k = i; k < j; ++k) group.push_back(std::move(terms[k].coef));
      c = sum(group);
    }
    if (!c.is_zero()) r.terms_.push_back({terms[i].mu, std::move(c)});
    i = j;
  }
  return r;
}

int DiffOp::order() const { return terms_.empty() ? -1 : int(terms_.front().mu.order()); }

RationalFunction DiffOp::coefficient(const Deriv& mu) const {
  for (const auto& t : terms_)
    if (t.mu == mu) return t.coef;
  return {};
}

bool DiffOp::has_constant_coefficients() const {
  return std::all_of(terms_.begin(), terms_.end(), [](const Term& t) { return t.coef.is_constant(); });
}

bool DiffOp::is_homogeneous() const {
  return std::all_of(terms_.begin(), terms_.end(),
                     [&](const Term& t) { return t.mu.order() == terms_.front().mu.order(); });
}

DiffOp DiffOp::operator-() const {
  DiffOp r = *this;
  for (auto& t : r.terms_) t.coef = -t.coef;
  return r;
}

DiffOp& DiffOp::operator+=(const DiffOp& o) {
  if (o.terms_.empty()) return *this;
  terms_ = merge_ops(terms_, o.terms_, false);
  return *this;
}

DiffOp& DiffOp::operator-=(const DiffOp& o) {
  if (o.terms_.empty()) return *this;
  terms_ = merge_ops(terms_, o.terms_, true);
  return *this;
}

DiffOp DiffOp::scaled_left(const RationalFunction& c) const {
  if (c.is_zero()) return {};
  DiffOp r = *this;
  for (auto& t : r.terms_) t.coef *= c;
  return r;
}

bool DiffOp::operator==(const DiffOp& o) const {
  if (terms_.size() != o.terms_.size()) return false;
  for (std::size_t i = 0; i < terms_.size(); ++i)
    if (!(terms_[i].mu == o.terms_[i].mu) || !(terms_[i].coef == o.terms_[i].coef)) return false;
  return true;
}

std::string DiffOp::to_string(const VarContext& ctx) const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& t : terms_) {
    std::string c = t.coef.to_string(ctx);
    bool neg = !c.empty() && c[0] == '-' && t.coef.is_constant();
    if (neg) c = c.substr(1);
    if (!first) os << (neg ? " - " : " + ");
    else if (neg) os << "-";
    first = false;
    bool compound = !t.coef.is_constant() && (c.find_first_of("+-/") != std::string::npos);
    bool has_d = t.mu.order() > 0;
    if (!has_d || c != "1") {
      os << (compound && has_d ? "(" + c + ")" : c);
      if (has_d) os << "*";
    }
    if (has_d) {
      os << "d[";
      bool f = true;
      for (std::size_t v = 0; v < ctx.n(); ++v)
        for (unsigned k = 0; k < t.mu.e[v]; ++k) {
          if (!f) os << ",";
          os << ctx.name(v);
          f = false;
        }
      os << "]";
    }
  }
  return os.str();
}

RationalFunction partial(const RationalFunction& f, const Deriv& mu) {
  RationalFunction r = f;
  for (std::size_t v = 0; v < kMaxBaseVars; ++v)
    for (unsigned k = 0; k < mu.e[v] && !r.is_zero(); ++k) r = r.derivative(v);
  return r;
}

namespace {

// Enumerates kappa <= alpha, carrying d^kappa(c) and the binomial product.
void weyl_rec(const Deriv& alpha, const Deriv& mu, std::size_t var, Deriv& kappa, const RationalFunction& dc,
              const mpz_class& binom, std::vector<DiffOp::Term>& out) {
  if (dc.is_zero()) return;
  if (var == kMaxBaseVars) {
    out.push_back({(alpha - kappa) + mu, dc * RationalFunction(Rational(binom))});
    return;
  }
  if (alpha.e[var] == 0) {
    weyl_rec(alpha, mu, var + 1, kappa, dc, binom, out);
    return;
  }
  RationalFunction cur = dc;
  mpz_class b = binom;
  unsigned a = alpha.e[var];
  for (unsigned k = 0; k <= a; ++k) {
    kappa.e[var] = std::uint8_t(k);
    weyl_rec(alpha, mu, var + 1, kappa, cur, b, out);
    if (k == a) break;
    cur = cur.derivative(var);
    if (cur.is_zero()) break;
    b = b * (a - k) / (k + 1);
  }
  kappa.e[var] = 0;
}

}  // namespace

DiffOp weyl_shift(const Deriv& alpha, const RationalFunction& c, const Deriv& mu) {
  if (c.is_zero()) return {};
  if (c.is_constant()) return DiffOp::monomial(alpha + mu, c);
  std::vector<DiffOp::Term> out;
  Deriv kappa;
  weyl_rec(alpha, mu, 0, kappa, c, mpz_class(1), out);
  return DiffOp::from_terms(std::move(out));
}

DiffOp operator*(const DiffOp& p, const DiffOp& q) {
  if (p.is_zero() || q.is_zero()) return {};
  std::vector<DiffOp::Term> out;
  out.reserve(p.terms_.size() * q.terms_.size());
  for (const auto& a : p.terms_) {
    for (const auto& b : q.terms_) {
      if (b.coef.is_constant() || a.mu.order() == 0) {
        out.push_back({a.mu + b.mu, a.coef * b.coef});
      } else {
        for (auto& t : weyl_shift(a.mu, b.coef, b.mu).terms_) out.push_back({t.mu, a.coef * t.coef});
      }
    }
  }
  return DiffOp::from_terms(std::move(out));
}

DiffOp mul(const DiffOp& p, const DiffOp& q) { return p * q; }

DiffOp adjoint(const DiffOp& p) {
  std::vector<DiffOp::Term> out;
  for (const auto& t : p.terms()) {
    bool neg = t.mu.order() % 2 == 1;
    DiffOp shifted = weyl_shift(t.mu, t.coef, Deriv{});
    for (const auto& s : shifted.terms())
      out.push_back({s.mu, neg ? -s.coef : s.coef});
  }
  return DiffOp::from_terms(std::move(out));
}

RationalFunction apply(const DiffOp& p, const RationalFunction& f) {
  RationalFunction r;
  for (const auto& t : p.terms()) r += t.coef * partial(f, t.mu);
  return r;
}

// ------------------------------------------------------------------ OpMatrix

OpMatrix::OpMatrix(ContextPtr ctx, std::size_t rows, std::size_t cols)
    : ctx_(std::move(ctx)), rows_(rows), cols_(cols), entries_(rows * cols) {}

OpMatrix::OpMatrix(ContextPtr ctx, std::size_t cols, std::vector<Row> rows)
    : ctx_(std::move(ctx)), rows_(rows.size()), cols_(cols) {
  entries_.reserve(rows_ * cols_);
  for (auto& r : rows) {
    if (r.size() != cols_) throw DimensionMismatch("row length does not match column count");
    for (auto& e : r) entries_.push_back(std::move(e));
  }
}

OpMatrix OpMatrix::identity(ContextPtr ctx, std::size_t n) {
  OpMatrix m(std::move(ctx), n, n);
  for (std::size_t i = 0; i < n; ++i) m.at(i, i) = DiffOp(1);
  return m;
}

Row OpMatrix::row(std::size_t i) const {
  return Row(entries_.begin() + std::ptrdiff_t(i * cols_), entries_.begin() + std::ptrdiff_t((i + 1) * cols_));
}

std::vector<Row> OpMatrix::row_list() const {
  std::vector<Row> r;
  r.reserve(rows_);
  for (std::size_t i = 0; i < rows_; ++i) r.push_back(row(i));
  return r;
}

int OpMatrix::order() const {
  int o = -1;
  for (const auto& e : entries_) o = std::max(o, e.order());
  return o;
}

int OpMatrix::row_order(std::size_t i) const {
  int o = -1;
  for (std::size_t j = 0; j < cols_; ++j) o = std::max(o, at(i, j).order());
  return o;
}

bool OpMatrix::is_zero() const {
  return std::all_of(entries_.begin(), entries_.end(), [](const DiffOp& d) { return d.is_zero(); });
}

bool OpMatrix::has_constant_coefficients() const {
  return std::all_of(entries_.begin(), entries_.end(), [](const DiffOp& d) { return d.has_constant_coefficients(); });
}

void OpMatrix::append_row(const Row& r) {
  if (r.size() != cols_) throw DimensionMismatch("row length does not match column count");
  entries_.insert(entries_.end(), r.begin(), r.end());
  ++rows_;
}

OpMatrix OpMatrix::select_rows(std::span<const std::size_t> idx) const {
  OpMatrix m(ctx_, 0, cols_);
  for (auto i : idx) m.append_row(row(i));
  return m;
}

bool OpMatrix::operator==(const OpMatrix& o) const {
  return rows_ == o.rows_ && cols_ == o.cols_ && entries_ == o.entries_;
}

std::string OpMatrix::to_string() const {
  std::ostringstream os;
  for (std::size_t i = 0; i < rows_; ++i) {
    os << "[";
    for (std::size_t j = 0; j < cols_; ++j) os << (j ? ", " : "") << at(i, j).to_string(*ctx_);
    os << "]\n";
  }
  return os.str();
}

namespace {

void require_same_context(const OpMatrix& a, const OpMatrix& b) {
  if (a.context() != b.context() && !(a.ctx() == b.ctx()))
    throw DimensionMismatch("operators live over different variable contexts");
}

}  // namespace

OpMatrix operator*(const OpMatrix& a, const OpMatrix& b) {
  require_same_context(a, b);
  if (a.cols() != b.rows()) throw DimensionMismatch("composition needs cols(A) = rows(B)");
  OpMatrix r(a.context(), a.rows(), b.cols());
  std::vector<DiffOp::Term> acc;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < b.cols(); ++j) {
      acc.clear();
      for (std::size_t k = 0; k < a.cols(); ++k) {
        if (a.at(i, k).is_zero() || b.at(k, j).is_zero()) continue;
        DiffOp p = a.at(i, k) * b.at(k, j);
        acc.insert(acc.end(), p.terms().begin(), p.terms().end());
      }
      r.at(i, j) = DiffOp::from_terms(std::move(acc));
      acc = {};
    }
  return r;
}

OpMatrix operator+(const OpMatrix& a, const OpMatrix& b) {
  require_same_context(a, b);
  if (a.rows() != b.rows() || a.cols() != b.cols()) throw DimensionMismatch("sum needs equal shapes");
  OpMatrix r = a;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) r.at(i, j) += b.at(i, j);
  return r;
}

OpMatrix operator-(const OpMatrix& a, const OpMatrix& b) {
  require_same_context(a, b);
  if (a.rows() != b.rows() || a.cols() != b.cols()) throw DimensionMismatch("difference needs equal shapes");
  OpMatrix r = a;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) r.at(i, j) -= b.at(i, j);
  return r;
}

OpMatrix adjoint_matrix(const OpMatrix& a) {
  OpMatrix r(a.context(), a.cols(), a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) r.at(j, i) = adjoint(a.at(i, j));
  return r;
}

OpMatrix weight_rescale(const OpMatrix& a, std::span<const Rational> row_weights,
                        std::span<const Rational> col_weights) {
  if (row_weights.size() != a.rows() || col_weights.size() != a.cols())
    throw DimensionMismatch("weight lists must match the matrix shape");
  for (const auto& w : row_weights)
    if (sgn(w) == 0) throw ZeroWeight();
  for (const auto& w : col_weights)
    if (sgn(w) == 0) throw ZeroWeight();
  OpMatrix r = a;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) {
      Rational w = row_weights[i] * col_weights[j];
      if (w != 1) r.at(i, j) = r.at(i, j).scaled_left(w);
    }
  return r;
}

OpMatrix weighted_adjoint(const OpMatrix& a, std::span<const Rational> unknown_weights,
                          std::span<const Rational> equation_weights) {
  if (unknown_weights.size() != a.cols() || equation_weights.size() != a.rows())
    throw DimensionMismatch("weight lists must match the matrix shape");
  std::vector<Rational> inv;
  for (const auto& w : unknown_weights) {
    if (sgn(w) == 0) throw ZeroWeight();
    inv.push_back(1 / w);
  }
  return weight_rescale(adjoint_matrix(a), inv, equation_weights);
}

Row row_times(const Row& v, const OpMatrix& a) {
  if (v.size() != a.rows()) throw DimensionMismatch("row length does not match matrix rows");
  Row r(a.cols());
  for (std::size_t k = 0; k < v.size(); ++k) {
    if (v[k].is_zero()) continue;
    for (std::size_t j = 0; j < a.cols(); ++j)
      if (!a.at(k, j).is_zero()) r[j] += v[k] * a.at(k, j);
  }
  return r;
}

bool row_is_zero(const Row& v) {
  return std::all_of(v.begin(), v.end(), [](const DiffOp& d) { return d.is_zero(); });
}

int row_order(const Row& v) {
  int o = -1;
  for (const auto& d : v) o = std::max(o, d.order());
  return o;
}

}  // namespace dopalg
