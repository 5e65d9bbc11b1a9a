#include "dopalg/scalars.hpp"

#include <algorithm>
#include <array>
#include <map>
#include <sstream>

#include "dopalg/errors.hpp"

namespace dopalg {

std::string to_string(const Rational& q) { return q.get_str(); }

// ---------------------------------------------------------------- VarContext

VarContext::VarContext(std::vector<std::string> base_vars, std::vector<std::string> params)
    : base_(std::move(base_vars)), params_(std::move(params)) {
  if (base_.empty()) throw Error("a variable context needs at least one base variable");
  if (base_.size() > kMaxBaseVars) throw Error("too many base variables (max 8)");
  if (size() > kMaxVars) throw Error("too many variables and parameters (max 16)");
  for (std::size_t i = 0; i < size(); ++i)
    for (std::size_t j = i + 1; j < size(); ++j)
      if (name(i) == name(j)) throw Error("duplicate variable name: " + name(i));
}

const std::string& VarContext::name(std::size_t index) const {
  return index < base_.size() ? base_[index] : params_.at(index - base_.size());
}

std::optional<std::size_t> VarContext::index_of(std::string_view nm) const {
  for (std::size_t i = 0; i < size(); ++i)
    if (name(i) == nm) return i;
  return std::nullopt;
}

ContextPtr make_context(std::vector<std::string> base_vars, std::vector<std::string> params) {
  return std::make_shared<const VarContext>(std::move(base_vars), std::move(params));
}

// ----------------------------------------------------------------- Exponents

unsigned Exponents::degree() const {
  unsigned d = 0;
  for (auto x : e) d += x;
  return d;
}

int compare_deglex(const Exponents& a, const Exponents& b) {
  unsigned da = a.degree(), db = b.degree();
  if (da != db) return da < db ? -1 : 1;
  for (std::size_t i = 0; i < kMaxVars; ++i)
    if (a.e[i] != b.e[i]) return a.e[i] < b.e[i] ? -1 : 1;
  return 0;
}

namespace {

Exponents add_exponents(const Exponents& a, const Exponents& b) {
  Exponents r;
  for (std::size_t i = 0; i < kMaxVars; ++i) {
    unsigned s = unsigned(a.e[i]) + b.e[i];
    if (s > 65535) throw ResourceBudgetExceeded("polynomial exponent overflow");
    r.e[i] = std::uint16_t(s);
  }
  return r;
}

bool exponent_divides(const Exponents& a, const Exponents& b) {
  for (std::size_t i = 0; i < kMaxVars; ++i)
    if (a.e[i] > b.e[i]) return false;
  return true;
}

Exponents sub_exponents(const Exponents& a, const Exponents& b) {
  Exponents r;
  for (std::size_t i = 0; i < kMaxVars; ++i) r.e[i] = std::uint16_t(a.e[i] - b.e[i]);
  return r;
}

}  // namespace

// ---------------------------------------------------------------------- Poly

class PolyBuilder {
 public:
  // Sorts, merges equal exponents, drops zeros.
  static Poly from_unsorted(std::vector<Poly::Term> terms) {
    std::sort(terms.begin(), terms.end(), [](const Poly::Term& a, const Poly::Term& b) {
      return compare_deglex(a.exp, b.exp) > 0;
    });
    Poly p;
    for (auto& t : terms) {
      if (!p.terms_.empty() && p.terms_.back().exp == t.exp) {
        p.terms_.back().coef += t.coef;
      } else {
        if (!p.terms_.empty() && sgn(p.terms_.back().coef) == 0) p.terms_.pop_back();
        p.terms_.push_back(std::move(t));
      }
    }
    if (!p.terms_.empty() && sgn(p.terms_.back().coef) == 0) p.terms_.pop_back();
    return p;
  }
  static Poly from_sorted(std::vector<Poly::Term> terms) {
    Poly p;
    p.terms_ = std::move(terms);
    return p;
  }
};

Poly::Poly(Rational c) {
  c.canonicalize();
  if (sgn(c) != 0) terms_.push_back({Exponents{}, std::move(c)});
}

Poly Poly::variable(std::size_t index) {
  Exponents e;
  e.e.at(index) = 1;
  return monomial(e, 1);
}

Poly Poly::monomial(const Exponents& exp, Rational c) {
  Poly p;
  c.canonicalize();
  if (sgn(c) != 0) p.terms_.push_back({exp, std::move(c)});
  return p;
}

bool Poly::is_constant() const { return terms_.empty() || (terms_.size() == 1 && terms_[0].exp.degree() == 0); }

Rational Poly::constant_value() const {
  if (terms_.empty()) return 0;
  return terms_.back().exp.degree() == 0 ? terms_.back().coef : Rational(0);
}

unsigned Poly::total_degree() const { return terms_.empty() ? 0 : terms_.front().exp.degree(); }

unsigned Poly::degree_in(std::size_t var) const {
  unsigned d = 0;
  for (const auto& t : terms_) d = std::max<unsigned>(d, t.exp.e[var]);
  return d;
}

bool Poly::depends_on(std::size_t var) const { return degree_in(var) > 0; }

bool Poly::depends_on_range(std::size_t first, std::size_t last) const {
  for (const auto& t : terms_)
    for (std::size_t v = first; v < last; ++v)
      if (t.exp.e[v]) return true;
  return false;
}

Poly Poly::operator-() const {
  Poly r = *this;
  for (auto& t : r.terms_) t.coef = -t.coef;
  return r;
}

namespace {

template <bool Subtract>
std::vector<Poly::Term> merge_terms(const std::vector<Poly::Term>& a, const std::vector<Poly::Term>& b) {
  std::vector<Poly::Term> out;
  out.reserve(a.size() + b.size());
  std::size_t i = 0, j = 0;
  while (i < a.size() || j < b.size()) {
    int c = i == a.size() ? -1 : j == b.size() ? 1 : compare_deglex(a[i].exp, b[j].exp);
    if (c > 0) {
      out.push_back(a[i++]);
    } else if (c < 0) {
      out.push_back(b[j++]);
      if constexpr (Subtract) out.back().coef = -out.back().coef;
    } else {
      Rational s = Subtract ? Rational(a[i].coef - b[j].coef) : Rational(a[i].coef + b[j].coef);
      if (sgn(s) != 0) out.push_back({a[i].exp, std::move(s)});
      ++i;
      ++j;
    }
  }
  return out;
}

}  // namespace

Poly& Poly::operator+=(const Poly& o) {
  terms_ = merge_terms<false>(terms_, o.terms_);
  return *this;
}

Poly& Poly::operator-=(const Poly& o) {
  terms_ = merge_terms<true>(terms_, o.terms_);
  return *this;
}

Poly operator*(const Poly& a, const Poly& b) {
  if (a.is_zero() || b.is_zero()) return Poly();
  std::vector<Poly::Term> prod;
  prod.reserve(a.terms_.size() * b.terms_.size());
  for (const auto& s : a.terms_)
    for (const auto& t : b.terms_) prod.push_back({add_exponents(s.exp, t.exp), s.coef * t.coef});
  return PolyBuilder::from_unsorted(std::move(prod));
}

Poly Poly::scaled(const Rational& c) const {
  if (sgn(c) == 0) return Poly();
  Poly r = *this;
  for (auto& t : r.terms_) t.coef *= c;
  return r;
}

Poly Poly::pow(unsigned k) const {
  Poly r(1), base = *this;
  while (k) {
    if (k & 1u) r = r * base;
    k >>= 1u;
    if (k) base = base * base;
  }
  return r;
}

Poly Poly::derivative(std::size_t var) const {
  std::vector<Term> out;
  for (const auto& t : terms_) {
    if (!t.exp.e[var]) continue;
    Term d{t.exp, t.coef * t.exp.e[var]};
    d.exp.e[var] -= 1;
    out.push_back(std::move(d));
  }
  // Lowering one exponent by one keeps deglex order among survivors.
  return PolyBuilder::from_sorted(std::move(out));
}

Poly Poly::substitute(std::size_t var, const Poly& value) const {
  Poly result;
  std::vector<Poly> powers{Poly(1)};
  for (const auto& t : terms_) {
    unsigned k = t.exp.e[var];
    while (powers.size() <= k) powers.push_back(powers.back() * value);
    Exponents rest = t.exp;
    rest.e[var] = 0;
    result += Poly::monomial(rest, t.coef) * powers[k];
  }
  return result;
}

Poly Poly::drop_variable(std::size_t var) const {
  if (depends_on(var)) throw Error("cannot drop a variable the polynomial depends on");
  std::vector<Term> out = terms_;
  for (auto& t : out) {
    for (std::size_t v = var; v + 1 < kMaxVars; ++v) t.exp.e[v] = t.exp.e[v + 1];
    t.exp.e[kMaxVars - 1] = 0;
  }
  return PolyBuilder::from_sorted(std::move(out));
}

Poly Poly::monic() const {
  if (terms_.empty() || terms_.front().coef == 1) return *this;
  Rational inv = 1 / terms_.front().coef;
  return scaled(inv);
}

std::optional<Poly> Poly::divide_exact(const Poly& a, const Poly& b) {
  if (b.is_zero()) throw DivisionByZero();
  if (b.is_constant()) return a.scaled(1 / b.constant_value());
  std::vector<Term> quotient;
  Poly rem = a;
  const Term& lb = b.leading();
  while (!rem.is_zero()) {
    const Term& lr = rem.leading();
    if (!exponent_divides(lb.exp, lr.exp)) return std::nullopt;
    Term q{sub_exponents(lr.exp, lb.exp), lr.coef / lb.coef};
    rem -= Poly::monomial(q.exp, q.coef) * b;
    quotient.push_back(std::move(q));
  }
  // Quotient terms come out in decreasing order.
  return PolyBuilder::from_sorted(std::move(quotient));
}

bool Poly::operator==(const Poly& o) const {
  if (terms_.size() != o.terms_.size()) return false;
  for (std::size_t i = 0; i < terms_.size(); ++i)
    if (!(terms_[i].exp == o.terms_[i].exp) || terms_[i].coef != o.terms_[i].coef) return false;
  return true;
}

std::string Poly::to_string(const VarContext& ctx) const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& t : terms_) {
    Rational c = t.coef;
    bool neg = sgn(c) < 0;
    if (neg) c = -c;
    if (first) {
      if (neg) os << "-";
    } else {
      os << (neg ? " - " : " + ");
    }
    first = false;
    bool has_vars = t.exp.degree() > 0;
    bool print_coef = !has_vars || c != 1;
    if (print_coef) os << c.get_str();
    bool need_star = print_coef;
    for (std::size_t v = 0; v < kMaxVars; ++v) {
      if (!t.exp.e[v]) continue;
      if (need_star) os << "*";
      os << ctx.name(v);
      if (t.exp.e[v] > 1) os << "^" << unsigned(t.exp.e[v]);
      need_star = true;
    }
  }
  return os.str();
}

// ----------------------------------------------------------------------- gcd

namespace {

using CoeffList = std::vector<Poly>;  // index = degree in the main variable

CoeffList coeffs_in(const Poly& p, std::size_t v) {
  CoeffList out(p.degree_in(v) + 1);
  for (const auto& t : p.terms()) {
    Exponents rest = t.exp;
    unsigned k = rest.e[v];
    rest.e[v] = 0;
    out[k] += Poly::monomial(rest, t.coef);
  }
  return out;
}

Poly from_coeffs(const CoeffList& c, std::size_t v) {
  Poly r;
  for (std::size_t k = 0; k < c.size(); ++k) {
    if (c[k].is_zero()) continue;
    Exponents e;
    e.e[v] = std::uint16_t(k);
    r += Poly::monomial(e, 1) * c[k];
  }
  return r;
}

void trim(CoeffList& c) {
  while (!c.empty() && c.back().is_zero()) c.pop_back();
}

Poly content(const CoeffList& c) {
  Poly g;
  for (const auto& x : c) {
    if (x.is_zero()) continue;
    g = gcd(g, x);
    if (g.is_constant()) return Poly(1);
  }
  return g;
}

// gcd of g and every entry of c, stopping as soon as it is a unit.
Poly content_with(Poly g, const CoeffList& c) {
  for (const auto& x : c) {
    if (g.is_constant()) return Poly(1);
    if (!x.is_zero()) g = gcd(g, x);
  }
  return g.is_constant() ? Poly(1) : g.monic();
}

CoeffList divide_all(const CoeffList& c, const Poly& d) {
  CoeffList out;
  out.reserve(c.size());
  for (const auto& x : c) {
    auto q = Poly::divide_exact(x, d);
    if (!q) throw Error("internal: inexact content division");
    out.push_back(std::move(*q));
  }
  return out;
}

// Scales to integer coefficients with gcd 1; keeps the PRS from blowing up.
void make_primitive(CoeffList& c) {
  mpz_class num = 0, den = 1;
  for (const auto& x : c)
    for (const auto& t : x.terms()) {
      mpz_gcd(num.get_mpz_t(), num.get_mpz_t(), t.coef.get_num_mpz_t());
      mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), t.coef.get_den_mpz_t());
    }
  if (num == 0 || (num == 1 && den == 1)) return;
  Rational f(den, num);
  f.canonicalize();
  for (auto& x : c) x = x.scaled(f);
}

// Pseudo-remainder of a by b (deg a >= deg b), both trimmed and nonempty.
CoeffList pseudo_remainder(CoeffList a, const CoeffList& b) {
  const Poly& lb = b.back();
  std::size_t db = b.size() - 1;
  int e = int(a.size()) - int(db);
  while (!a.empty() && a.size() - 1 >= db) {
    Poly lead = a.back();
    std::size_t shift = a.size() - 1 - db;
    for (auto& x : a) x = x * lb;
    for (std::size_t k = 0; k <= db; ++k) a[k + shift] -= lead * b[k];
    trim(a);
    --e;
  }
  if (e > 0) {
    Poly f = lb.pow(unsigned(e));
    for (auto& x : a) x = x * f;
  }
  return a;
}

std::size_t highest_variable(const Poly& a, const Poly& b) {
  std::size_t best = 0;
  bool found = false;
  for (const Poly* p : {&a, &b})
    for (const auto& t : p->terms())
      for (std::size_t v = 0; v < kMaxVars; ++v)
        if (t.exp.e[v] && (!found || v > best)) {
          best = v;
          found = true;
        }
  return best;
}

// Image of p with every variable except v replaced by the integer in vals.
Poly univariate_image(const Poly& p, std::size_t v, const std::array<long, kMaxVars>& vals) {
  std::map<unsigned, Rational> acc;
  for (const auto& t : p.terms()) {
    Rational c = t.coef;
    for (std::size_t w = 0; w < kMaxVars; ++w) {
      if (w == v || t.exp.e[w] == 0) continue;
      Rational x = vals[w];
      for (unsigned k = 0; k < t.exp.e[w]; ++k) c *= x;
    }
    acc[t.exp.e[v]] += c;
  }
  Poly out;
  for (auto& [d, c] : acc) {
    if (sgn(c) == 0) continue;
    Exponents e{};
    e.e[v] = static_cast<std::uint16_t>(d);
    out += Poly::monomial(e, c);
  }
  return out;
}

// True when univariate images show gcd(a, b) is constant. If g | b has positive
// degree in v and the image keeps the leading coefficient of b in v, the image
// of g keeps its degree and divides the image gcd. False means "unknown".
bool proven_coprime(const Poly& a, const Poly& b) {
  std::vector<std::size_t> shared;
  std::size_t used = 0;
  for (std::size_t v = 0; v < kMaxVars; ++v) {
    bool da = a.depends_on(v), db = b.depends_on(v);
    if (da || db) ++used;
    if (da && db) shared.push_back(v);
  }
  if (used < 2) return false;
  std::array<long, kMaxVars> vals{};
  for (std::size_t v : shared) {
    unsigned want = b.degree_in(v);
    bool ok = false;
    for (long attempt = 0; attempt < 4 && !ok; ++attempt) {
      for (std::size_t w = 0; w < kMaxVars; ++w) vals[w] = 2 + long(w) * 5 + attempt * 13;
      Poly ib = univariate_image(b, v, vals);
      if (ib.degree_in(v) != want) continue;
      ok = true;
      if (!gcd(univariate_image(a, v, vals), ib).is_constant()) return false;
    }
    if (!ok) return false;
  }
  return true;
}

}  // namespace

Poly gcd(const Poly& a, const Poly& b) {
  if (a.is_zero()) return b.monic();
  if (b.is_zero()) return a.monic();
  if (a.is_constant() || b.is_constant()) return Poly(1);
  if (a == b) return a.monic();
  if (b.terms().size() <= a.terms().size() && Poly::divide_exact(a, b)) return b.monic();
  if (a.terms().size() <= b.terms().size() && Poly::divide_exact(b, a)) return a.monic();
  if (proven_coprime(a, b)) return Poly(1);
  std::size_t v = highest_variable(a, b);
  CoeffList ca = coeffs_in(a, v), cb = coeffs_in(b, v);
  if (ca.size() < cb.size()) std::swap(ca, cb);
  // Only the lower-degree side is made primitive: the content of the other
  // one drops out of the first pseudo-remainder anyway.
  Poly cont_b = content(cb);
  if (cb.size() == 1) return content_with(cont_b, ca);
  Poly c = content_with(cont_b, ca);
  CoeffList pa = std::move(ca), pb = divide_all(cb, cont_b);
  make_primitive(pa);
  make_primitive(pb);
  // Subresultant PRS: exact divisions keep the coefficients small without
  // taking contents at every step.
  Poly g(1), h(1);
  while (true) {
    std::size_t delta = pa.size() - pb.size();
    CoeffList r = pseudo_remainder(pa, pb);
    if (r.empty()) break;
    if (r.size() == 1) return c;
    pa = std::move(pb);
    pb = divide_all(r, g * h.pow(unsigned(delta)));
    g = pa.back();
    if (delta == 0)
      continue;
    else if (delta == 1)
      h = g;
    else
      h = *Poly::divide_exact(g.pow(unsigned(delta)), h.pow(unsigned(delta - 1)));
  }
  Poly last = from_coeffs(pb, v);
  CoeffList lb = coeffs_in(last, v);
  Poly cl = content(lb);
  return (c * from_coeffs(divide_all(lb, cl), v)).monic();
}

// ---------------------------------------------------------- RationalFunction

RationalFunction::RationalFunction(const Poly& p) {
  if (p.is_constant())
    scalar_ = p.constant_value();
  else
    frac_ = std::make_unique<Frac>(Frac{p, Poly(1)});
}

RationalFunction::RationalFunction(const Poly& num, const Poly& den) { set_fraction(num, den); }

RationalFunction RationalFunction::variable(std::size_t index) { return RationalFunction(Poly::variable(index)); }

RationalFunction::RationalFunction(const RationalFunction& o)
    : scalar_(o.scalar_), frac_(o.frac_ ? std::make_unique<Frac>(*o.frac_) : nullptr) {}

RationalFunction& RationalFunction::operator=(const RationalFunction& o) {
  if (this != &o) {
    scalar_ = o.scalar_;
    frac_ = o.frac_ ? std::make_unique<Frac>(*o.frac_) : nullptr;
  }
  return *this;
}

RationalFunction::~RationalFunction() = default;

void RationalFunction::set_fraction(Poly num, Poly den) {
  if (den.is_zero()) throw DivisionByZero();
  if (num.is_zero()) {
    frac_.reset();
    scalar_ = 0;
    return;
  }
  if (den.is_constant()) {
    Rational d = den.constant_value();
    if (num.is_constant()) {
      frac_.reset();
      scalar_ = num.constant_value() / d;
      return;
    }
    frac_ = std::make_unique<Frac>(Frac{num.scaled(1 / d), Poly(1)});
    scalar_ = 0;
    return;
  }
  Poly g = gcd(num, den);
  if (!g.is_constant()) {
    num = *Poly::divide_exact(num, g);
    den = *Poly::divide_exact(den, g);
  }
  Rational lc = den.leading().coef;
  if (lc != 1) {
    Rational inv = 1 / lc;
    num = num.scaled(inv);
    den = den.scaled(inv);
  }
  if (den.is_constant()) {
    set_fraction(std::move(num), std::move(den));
    return;
  }
  frac_ = std::make_unique<Frac>(Frac{std::move(num), std::move(den)});
  scalar_ = 0;
}

void RationalFunction::set_coprime(Poly num, Poly den) {
  if (num.is_zero() || den.is_constant()) return set_fraction(std::move(num), std::move(den));
  Rational lc = den.leading().coef;
  if (lc != 1) {
    Rational inv = 1 / lc;
    num = num.scaled(inv);
    den = den.scaled(inv);
  }
  frac_ = std::make_unique<Frac>(Frac{std::move(num), std::move(den)});
  scalar_ = 0;
}

Poly RationalFunction::numerator() const { return frac_ ? frac_->num : Poly(scalar_); }
Poly RationalFunction::denominator() const { return frac_ ? frac_->den : Poly(1); }

RationalFunction RationalFunction::operator-() const {
  if (!frac_) return RationalFunction(Rational(-scalar_));
  RationalFunction r = *this;
  r.frac_->num = -r.frac_->num;
  return r;
}

RationalFunction& RationalFunction::operator+=(const RationalFunction& o) {
  if (!frac_ && !o.frac_) {
    scalar_ += o.scalar_;
    return *this;
  }
  Poly an = numerator(), ad = denominator(), bn = o.numerator(), bd = o.denominator();
  if (ad == bd) {
    set_fraction(an + bn, ad);
    return *this;
  }
  // With g = gcd(ad, bd), only factors of g can cancel.
  Poly g = gcd(ad, bd);
  if (g.is_constant()) {
    set_coprime(an * bd + bn * ad, ad * bd);
    return *this;
  }
  Poly ad1 = *Poly::divide_exact(ad, g), bd1 = *Poly::divide_exact(bd, g);
  Poly t = an * bd1 + bn * ad1;
  Poly h = gcd(t, g);
  if (!h.is_constant()) {
    t = *Poly::divide_exact(t, h);
    bd = *Poly::divide_exact(bd, h);
  }
  set_coprime(std::move(t), ad1 * bd);
  return *this;
}

RationalFunction& RationalFunction::operator-=(const RationalFunction& o) {
  if (!frac_ && !o.frac_) {
    scalar_ -= o.scalar_;
    return *this;
  }
  return *this += -o;
}

RationalFunction& RationalFunction::operator*=(const RationalFunction& o) {
  if (!frac_ && !o.frac_) {
    scalar_ *= o.scalar_;
    return *this;
  }
  if (o.is_zero() || is_zero()) {
    frac_.reset();
    scalar_ = 0;
    return *this;
  }
  if (!o.frac_) {
    frac_->num = frac_->num.scaled(o.scalar_);
    return *this;
  }
  if (!frac_) {
    Rational s = scalar_;
    *this = o;
    frac_->num = frac_->num.scaled(s);
    return *this;
  }
  Poly an = frac_->num, ad = frac_->den, bn = o.frac_->num, bd = o.frac_->den;
  Poly g1 = gcd(an, bd), g2 = gcd(bn, ad);
  if (!g1.is_constant()) {
    an = *Poly::divide_exact(an, g1);
    bd = *Poly::divide_exact(bd, g1);
  }
  if (!g2.is_constant()) {
    bn = *Poly::divide_exact(bn, g2);
    ad = *Poly::divide_exact(ad, g2);
  }
  set_coprime(an * bn, ad * bd);
  return *this;
}

RationalFunction& RationalFunction::operator/=(const RationalFunction& o) { return *this *= o.inverse(); }

RationalFunction RationalFunction::inverse() const {
  if (is_zero()) throw DivisionByZero();
  if (!frac_) return RationalFunction(Rational(1 / scalar_));
  return RationalFunction(frac_->den, frac_->num);
}

RationalFunction RationalFunction::pow(int k) const {
  if (k < 0) return inverse().pow(-k);
  RationalFunction r(1), base = *this;
  while (k) {
    if (k & 1) r *= base;
    k >>= 1;
    if (k) base *= base;
  }
  return r;
}

RationalFunction RationalFunction::derivative(std::size_t var) const {
  if (!frac_) return RationalFunction();
  const Poly& n = frac_->num;
  const Poly& d = frac_->den;
  bool dn = n.depends_on(var), dd = d.depends_on(var);
  if (!dn && !dd) return RationalFunction();
  if (!dd) return RationalFunction(n.derivative(var), d);
  // With g = gcd(d, d'), every factor of d that involves var gains exactly
  // one power and cannot cancel; factors free of var all divide g.
  Poly dv = d.derivative(var);
  Poly g = gcd(d, dv);
  Poly d1 = *Poly::divide_exact(d, g), d2 = *Poly::divide_exact(dv, g);
  Poly num = n.derivative(var) * d1 - n * d2, den = d1 * d;
  if (num.is_zero()) return {};
  for (Poly rest = g; !rest.is_constant();) {
    Poly h = gcd(num, rest);
    if (h.is_constant()) break;
    num = *Poly::divide_exact(num, h);
    den = *Poly::divide_exact(den, h);
    rest = *Poly::divide_exact(rest, h);
  }
  RationalFunction r;
  r.set_coprime(std::move(num), std::move(den));
  return r;
}

bool RationalFunction::depends_on(std::size_t var) const {
  return frac_ && (frac_->num.depends_on(var) || frac_->den.depends_on(var));
}

bool RationalFunction::depends_on_range(std::size_t first, std::size_t last) const {
  return frac_ && (frac_->num.depends_on_range(first, last) || frac_->den.depends_on_range(first, last));
}

RationalFunction RationalFunction::substitute(std::size_t var, const RationalFunction& value) const {
  if (!depends_on(var)) return *this;
  // Evaluate num and den by Horner in the fraction field.
  auto eval = [&](const Poly& p) {
    RationalFunction acc;
    auto cs = coeffs_in(p, var);
    for (std::size_t k = cs.size(); k-- > 0;) {
      acc *= value;
      acc += RationalFunction(cs[k]);
    }
    return acc;
  };
  return eval(frac_->num) / eval(frac_->den);
}

RationalFunction RationalFunction::drop_variable(std::size_t var) const {
  if (!frac_) return *this;
  return RationalFunction(frac_->num.drop_variable(var), frac_->den.drop_variable(var));
}

bool RationalFunction::operator==(const RationalFunction& o) const {
  if (bool(frac_) != bool(o.frac_)) return false;
  if (!frac_) return scalar_ == o.scalar_;
  return frac_->num == o.frac_->num && frac_->den == o.frac_->den;
}

std::string RationalFunction::to_string(const VarContext& ctx) const {
  if (!frac_) return scalar_.get_str();
  std::string n = frac_->num.to_string(ctx);
  if (frac_->den.is_constant()) return n;
  if (frac_->num.terms().size() > 1) n = "(" + n + ")";
  return n + "/(" + frac_->den.to_string(ctx) + ")";
}

RationalFunction sum(std::span<const RationalFunction> xs) {
  Rational scalar = 0;
  std::vector<const RationalFunction*> fr;
  for (const auto& x : xs) {
    if (x.is_constant())
      scalar += x.constant();
    else
      fr.push_back(&x);
  }
  if (fr.empty()) return RationalFunction(scalar);
  if (fr.size() == 1) return *fr[0] + RationalFunction(scalar);
  // Bases: distinct denominators, dropping any that divides another one.
  std::vector<Poly> bases;
  for (const auto* x : fr) {
    const Poly& d = x->frac_->den;
    if (d.is_constant()) continue;
    bool covered = false;
    for (auto& b : bases) {
      if (b == d || Poly::divide_exact(b, d)) {
        covered = true;
        break;
      }
      if (Poly::divide_exact(d, b)) {
        b = d;
        covered = true;
        break;
      }
    }
    if (!covered) bases.push_back(d);
  }
  // Replacing a base can leave another base dividing it.
  for (std::size_t i = 0; i < bases.size(); ++i)
    for (std::size_t j = 0; j < bases.size(); ++j)
      if (i != j && !bases[i].is_zero() && !bases[j].is_zero() && Poly::divide_exact(bases[j], bases[i])) {
        bases[i] = Poly();
        break;
      }
  std::erase_if(bases, [](const Poly& b) { return b.is_zero(); });
  Poly den(1);
  for (const auto& b : bases) den = den * b;
  Poly num = den.scaled(scalar);
  for (const auto* x : fr) num += x->frac_->num * *Poly::divide_exact(den, x->frac_->den);
  if (num.is_zero()) return {};
  // Any common factor of num and den divides one of the bases.
  for (const auto& b : bases) {
    Poly rest = b;
    while (!rest.is_constant()) {
      Poly g = gcd(num, rest);
      if (g.is_constant()) break;
      num = *Poly::divide_exact(num, g);
      den = *Poly::divide_exact(den, g);
      rest = *Poly::divide_exact(rest, g);
    }
  }
  RationalFunction r;
  r.set_coprime(std::move(num), std::move(den));
  return r;
}

RationalFunction arith(const RationalFunction& a, const RationalFunction& b, ArithKind kind) {
  switch (kind) {
    case ArithKind::add: return a + b;
    case ArithKind::sub: return a - b;
    case ArithKind::mul: return a * b;
    case ArithKind::div: return a / b;
  }
  return {};
}

RationalFunction diff(const RationalFunction& a, std::size_t var, const VarContext& ctx) {
  if (!ctx.is_base(var)) throw UnknownVariable(var < ctx.size() ? ctx.name(var) : std::to_string(var));
  return a.derivative(var);
}

}  // namespace dopalg
