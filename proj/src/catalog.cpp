#include "dopalg/catalog.hpp"

#include <algorithm>

#include "dopalg/errors.hpp"
#include "dopalg/homology.hpp"
#include "dopalg/spencer.hpp"

namespace dopalg {

MetricSpec MetricSpec::euclidean(std::size_t n) { return {n, std::vector<int>(n, 1)}; }

MetricSpec MetricSpec::minkowski(std::size_t n) {
  MetricSpec m{n, std::vector<int>(n, 1)};
  if (n > 0) m.signature[0] = -1;
  return m;
}

void MetricSpec::validate() const {
  if (n < 1 || n > kMaxBaseVars) throw UnsupportedDimension("dimension must be between 1 and 8");
  if (signature.size() != n) throw DimensionMismatch("signature length must equal n");
  for (int s : signature)
    if (s != 1 && s != -1) throw Error("signature entries must be +1 or -1");
}

void SystemDef::validate() const {
  if (matrix.cols() != unknowns.size()) throw DimensionMismatch(name + ": unknown list does not match the columns");
  if (matrix.rows() != equations.size()) throw DimensionMismatch(name + ": equation labels do not match the rows");
  if (!unknown_weights.empty() && unknown_weights.size() != unknowns.size())
    throw DimensionMismatch(name + ": unknown weights do not match");
  if (!equation_weights.empty() && equation_weights.size() != equations.size())
    throw DimensionMismatch(name + ": equation weights do not match");
}

std::vector<std::pair<std::size_t, std::size_t>> sym_pairs(std::size_t n) {
  std::vector<std::pair<std::size_t, std::size_t>> p;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j) p.emplace_back(i, j);
  return p;
}

std::vector<Rational> sym_weights(std::size_t n) {
  std::vector<Rational> w;
  for (auto [i, j] : sym_pairs(n)) w.emplace_back(i == j ? 1 : 2);
  return w;
}

std::vector<Rational> metric_weights(const MetricSpec& m) {
  auto w = sym_weights(m.n);
  auto pairs = sym_pairs(m.n);
  for (std::size_t k = 0; k < pairs.size(); ++k) w[k] *= m.signature[pairs[k].first] * m.signature[pairs[k].second];
  return w;
}

std::size_t sym_index(std::size_t n, std::size_t i, std::size_t j) {
  if (i > j) std::swap(i, j);
  std::size_t idx = 0;
  for (std::size_t a = 0; a < i; ++a) idx += n - a;
  return idx + (j - i);
}

namespace {

ContextPtr coords(std::size_t n) {
  std::vector<std::string> v;
  for (std::size_t i = 1; i <= n; ++i) v.push_back("x" + std::to_string(i));
  return make_context(v);
}

std::vector<std::string> sym_names(const std::string& stem, std::size_t n) {
  std::vector<std::string> out;
  for (auto [i, j] : sym_pairs(n)) out.push_back(stem + std::to_string(i + 1) + std::to_string(j + 1));
  return out;
}

std::vector<std::string> numbered(const std::string& stem, std::size_t k) {
  std::vector<std::string> out;
  for (std::size_t i = 1; i <= k; ++i) out.push_back(stem + std::to_string(i));
  return out;
}

DiffOp d1(std::size_t i) { return DiffOp::d(i); }
DiffOp d2(std::size_t i, std::size_t j) { return DiffOp::monomial(Deriv::unit(i) + Deriv::unit(j)); }

SystemDef make(std::string name, ContextPtr ctx, std::vector<std::string> unknowns, std::vector<std::string> eqs,
               OpMatrix m, std::string note) {
  SystemDef s{std::move(name), std::move(ctx), std::move(unknowns), std::move(eqs), std::move(m), std::move(note), {}, {}};
  s.unknown_weights.assign(s.unknowns.size(), Rational(1));
  s.equation_weights.assign(s.equations.size(), Rational(1));
  s.validate();
  return s;
}

void require(bool ok, const std::string& what) {
  if (!ok) throw InternalIdentityViolated(what);
}

}  // namespace

SystemDef killing(const MetricSpec& m) {
  m.validate();
  std::size_t n = m.n;
  auto ctx = coords(n);
  auto pairs = sym_pairs(n);
  OpMatrix a(ctx, pairs.size(), n);
  for (std::size_t r = 0; r < pairs.size(); ++r) {
    auto [i, j] = pairs[r];
    // Omega_ij = s_j d_i xi^j + s_i d_j xi^i
    a.at(r, j) += d1(i).scaled_left(m.signature[j]);
    a.at(r, i) += d1(j).scaled_left(m.signature[i]);
  }
  auto s = make("killing", ctx, numbered("xi", n), sym_names("O", n), std::move(a), "Lie derivative of a flat metric");
  s.equation_weights = sym_weights(n);
  return s;
}

SystemDef conformal_killing(const MetricSpec& m) {
  m.validate();
  std::size_t n = m.n;
  if (n < 3) throw UnsupportedDimension("the conformal Killing operator needs n >= 3");
  auto ctx = coords(n);
  OpMatrix a(ctx, 0, n);
  std::vector<std::string> eqs;
  for (auto [i, j] : sym_pairs(n)) {
    Row r(n);
    if (i != j) {
      r[j] += d1(i).scaled_left(m.signature[j]);
      r[i] += d1(j).scaled_left(m.signature[i]);
    } else {
      if (i + 1 == n) continue;
      // n d_i xi^i - sum_r d_r xi^r: the trace-free diagonal, rescaled
      r[i] += d1(i).scaled_left(long(n));
      for (std::size_t k = 0; k < n; ++k) r[k] -= d1(k);
    }
    a.append_row(r);
    eqs.push_back("O" + std::to_string(i + 1) + std::to_string(j + 1));
  }
  return make("conformal_killing", ctx, numbered("xi", n), eqs, std::move(a), "trace-free Lie derivative of a flat metric");
}

SystemDef riemann(const MetricSpec& m, const Budget& budget) {
  SystemDef k = killing(m);
  OpMatrix r = cc(k.matrix, budget);
  auto s = make("riemann", k.ctx, sym_names("O", m.n), numbered("R", r.rows()), std::move(r),
                "generating compatibility conditions of the Killing operator");
  s.unknown_weights = sym_weights(m.n);
  return s;
}

SystemDef bianchi(const MetricSpec& m, const Budget& budget) {
  SystemDef r = riemann(m, budget);
  OpMatrix b = cc(r.matrix, budget);
  return make("bianchi", r.ctx, r.equations, numbered("B", b.rows()), std::move(b),
              "generating compatibility conditions of the Riemann operator");
}

SystemDef ricci(const MetricSpec& m) {
  m.validate();
  std::size_t n = m.n;
  auto ctx = coords(n);
  auto pairs = sym_pairs(n);
  OpMatrix a(ctx, pairs.size(), pairs.size());
  Rational half(1, 2);
  for (std::size_t row = 0; row < pairs.size(); ++row) {
    auto [i, j] = pairs[row];
    for (std::size_t r = 0; r < n; ++r) {
      Rational c = half * m.signature[r];
      a.at(row, sym_index(n, r, j)) += d2(r, i).scaled_left(c);
      a.at(row, sym_index(n, i, r)) += d2(j, r).scaled_left(c);
      a.at(row, sym_index(n, i, j)) -= d2(r, r).scaled_left(c);
      a.at(row, sym_index(n, r, r)) -= d2(i, j).scaled_left(c);
    }
  }
  auto s = make("ricci", ctx, sym_names("O", n), sym_names("Ric", n), std::move(a), "linearized Ricci tensor");
  s.unknown_weights = metric_weights(m);
  s.equation_weights = metric_weights(m);
  return s;
}

SystemDef trace_flip(const MetricSpec& m) {
  m.validate();
  std::size_t n = m.n;
  auto ctx = coords(n);
  auto pairs = sym_pairs(n);
  OpMatrix a = OpMatrix::identity(ctx, pairs.size());
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t r = 0; r < n; ++r)
      a.at(sym_index(n, i, i), sym_index(n, r, r)) -= DiffOp(RationalFunction(Rational(m.signature[i] * m.signature[r], 2)));
  auto s = make("trace_flip", ctx, sym_names("O", n), sym_names("C", n), std::move(a), "Omega - 1/2 omega tr(Omega)");
  s.unknown_weights = metric_weights(m);
  s.equation_weights = metric_weights(m);
  return s;
}

SystemDef einstein(const MetricSpec& m) {
  SystemDef rc = ricci(m);
  SystemDef c = trace_flip(m);
  std::size_t n = m.n;
  // E_ij = R_ij - 1/2 s_i delta_ij sum_r s_r R_rr, written out row by row.
  OpMatrix e = rc.matrix;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t r = 0; r < n; ++r)
      for (std::size_t col = 0; col < e.cols(); ++col)
        e.at(sym_index(n, i, i), col) -=
            rc.matrix.at(sym_index(n, r, r), col).scaled_left(Rational(m.signature[i] * m.signature[r], 2));
  require(e == c.matrix * rc.matrix, "einstein differs from trace_flip o ricci");
  SystemDef dv = divergence(m);
  require((dv.matrix * e).is_zero(), "div o einstein is not zero");
  auto w = metric_weights(m);
  require(weighted_adjoint(e, w, w) == e, "einstein is not self-adjoint under the symmetric pairing");
  auto s = make("einstein", rc.ctx, rc.unknowns, sym_names("E", n), std::move(e), "linearized Einstein tensor");
  s.unknown_weights = w;
  s.equation_weights = w;
  return s;
}

SystemDef divergence(const MetricSpec& m) {
  m.validate();
  std::size_t n = m.n;
  auto ctx = coords(n);
  OpMatrix a(ctx, n, binomial(n + 1, 2));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) a.at(i, sym_index(n, i, j)) += d1(j).scaled_left(m.signature[j]);
  auto s = make("div", ctx, sym_names("E", n), numbered("div", n), std::move(a), "divergence of a symmetric tensor");
  s.unknown_weights = sym_weights(n);
  return s;
}

SystemDef cauchy(const MetricSpec& m) {
  m.validate();
  std::size_t n = m.n;
  auto ctx = coords(n);
  OpMatrix a(ctx, n, binomial(n + 1, 2));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) a.at(i, sym_index(n, i, j)) += d1(j);
  auto s = make("cauchy", ctx, sym_names("s", n), numbered("f", n), std::move(a), "stress equilibrium d_j sigma^ij");
  s.unknown_weights = sym_weights(n);
  return s;
}

SystemDef airy() {
  auto ctx = coords(2);
  OpMatrix a(ctx, 3, 1);
  a.at(0, 0) = d2(1, 1);
  a.at(1, 0) = -d2(0, 1);
  a.at(2, 0) = d2(0, 0);
  return make("airy", ctx, {"lam"}, sym_names("s", 2), std::move(a), "stress function parametrization");
}

SystemDef beltrami(bool weighted) {
  auto ctx = coords(3);
  // Rows sigma^11, 12, 13, 22, 23, 33; columns phi_11, 12, 13, 22, 23, 33.
  auto D = [](std::size_t i, std::size_t j, long c) { return d2(i - 1, j - 1).scaled_left(c); };
  std::vector<Row> rows = {
      {0, 0, 0, D(3, 3, 1), D(2, 3, -2), D(2, 2, 1)},
      {0, D(3, 3, -1), D(2, 3, 1), 0, D(1, 3, 1), D(1, 2, -1)},
      {0, D(2, 3, 1), D(2, 2, -1), D(1, 3, -1), D(1, 2, 1), 0},
      {D(3, 3, 1), 0, D(1, 3, -2), 0, 0, D(1, 1, 1)},
      {D(2, 3, -1), D(1, 3, 1), D(1, 2, 1), 0, D(1, 1, -1), 0},
      {D(2, 2, 1), D(1, 2, -2), 0, D(1, 1, 1), 0, 0},
  };
  OpMatrix b(ctx, 6, std::move(rows));
  SystemDef c = cauchy(MetricSpec::euclidean(3));
  require((c.matrix * b).is_zero(), "cauchy o beltrami is not zero");
  if (weighted) {
    // Symmetric weights on the stress side make the operator self-adjoint.
    auto w = sym_weights(3);
    std::vector<Rational> ones(6, Rational(1));
    b = weight_rescale(b, w, ones);
    require(adjoint_matrix(b) == b, "weighted beltrami is not self-adjoint");
  }
  return make(weighted ? "beltrami_weighted" : "beltrami", ctx, sym_names("phi", 3), sym_names("s", 3), std::move(b),
              "stress potentials in three dimensions");
}

namespace {

struct VessiotParts {
  ContextPtr ctx;
  RationalFunction c;
};

VessiotParts vessiot_context(std::optional<Rational> c) {
  if (c) return {make_context({"x1", "x2"}), RationalFunction(*c)};
  auto ctx = make_context({"x1", "x2"}, {"c"});
  return {ctx, RationalFunction::variable(2)};
}

}  // namespace

SystemDef vessiot(std::optional<Rational> c) {
  auto [ctx, cv] = vessiot_context(c);
  RationalFunction a = RationalFunction(1) - cv * RationalFunction::variable(1);
  // eta^i = alpha_r d_i xi^r + xi^r d_r alpha_i, eta^3 = beta d_r xi^r
  OpMatrix m(ctx, 3, 2);
  m.at(0, 0) = d1(0).scaled_left(a);
  m.at(0, 1) = DiffOp(a.derivative(1));
  m.at(1, 0) = d1(1).scaled_left(a);
  m.at(2, 0) = d1(0);
  m.at(2, 1) = d1(1);
  return make("vessiot", ctx, {"xi1", "xi2"}, {"eta1", "eta2", "eta3"}, std::move(m),
              "Medolaghi equations, alpha = (1 - c x2) dx1, beta = dx1^dx2");
}

SystemDef vessiot_cc(std::optional<Rational> c) {
  auto [ctx, cv] = vessiot_context(c);
  OpMatrix m(ctx, 1, 3);
  m.at(0, 0) = -d1(1);
  m.at(0, 1) = d1(0);
  m.at(0, 2) = DiffOp(-cv);
  return make("vessiot_cc", ctx, {"eta1", "eta2", "eta3"}, {"zeta"}, std::move(m), "d1 eta2 - d2 eta1 - c eta3");
}

SystemDef double_pendulum(bool equal) {
  auto ctx = make_context({"t"}, {"g", "l1", "l2"});
  RationalFunction g = RationalFunction::variable(1), l1 = RationalFunction::variable(2),
                   l2 = RationalFunction::variable(3);
  DiffOp dd = DiffOp::monomial(Deriv::unit(0) + Deriv::unit(0));
  OpMatrix m(ctx, 2, 3);
  m.at(0, 0) = dd;
  m.at(0, 1) = dd.scaled_left(l1) + DiffOp(g);
  m.at(1, 0) = dd;
  m.at(1, 2) = dd.scaled_left(l2) + DiffOp(g);
  auto s = make("pendulum", ctx, {"x", "th1", "th2"}, {"p1", "p2"}, std::move(m),
                "two pendula of lengths l1, l2 on a moving cart");
  if (!equal) return s;
  s = specialize(s, "l2", l1);
  s = rename_parameter(s, "l1", "l");
  s.name = "pendulum_equal";
  return s;
}

OpMatrix pendulum_parametrization(const SystemDef& p) {
  const auto& ctx = p.ctx;
  auto g = RationalFunction::variable(*ctx->index_of("g"));
  auto l1 = RationalFunction::variable(*ctx->index_of("l1"));
  auto l2 = RationalFunction::variable(*ctx->index_of("l2"));
  DiffOp d2t = DiffOp::monomial(Deriv::unit(0) + Deriv::unit(0));
  DiffOp d4t = d2t * d2t;
  OpMatrix m(ctx, 3, 1);
  m.at(0, 0) = d4t.scaled_left(-l1 * l2) - d2t.scaled_left(g * (l1 + l2)) - DiffOp(g * g);
  m.at(1, 0) = d4t.scaled_left(l2) + d2t.scaled_left(g);
  m.at(2, 0) = d4t.scaled_left(l1) + d2t.scaled_left(g);
  return m;
}

OpMatrix wave_operator(const MetricSpec& m) {
  if (m.n != 4) throw UnsupportedDimension("the trace flip is an involution only for n = 4");
  OpMatrix c = trace_flip(m).matrix;
  require(c * c == OpMatrix::identity(c.context(), c.rows()), "trace_flip is not an involution");
  return einstein(m).matrix * c;
}

LanczosCheck lanczos_check(const Budget& budget) {
  MetricSpec m = MetricSpec::euclidean(4);
  LanczosCheck out;
  SystemDef r = riemann(m, budget);
  OpMatrix b = cc(r.matrix, budget);
  out.bianchi_rows = b.rows();
  out.bianchi_order = b.order();
  out.bianchi_composes = (b * r.matrix).is_zero();
  out.adjoint_composes = (adjoint_matrix(r.matrix) * adjoint_matrix(b)).is_zero();
  out.lanczos_dim = lanczos_space(4).dim;
  auto rep = delta_complex(killing_symbol(m), 4);
  out.h3_dim = rep.cohomology[3];
  // 0 -> H^3 -> Lambda^3 (x) g_1 -> Lambda^4 (x) T -> 0
  std::size_t top = binomial(4, 4) * 4;
  out.sequence = {rep.cohomology[3], rep.dims[3], top};
  out.sequence_exact = rep.rank_in[3] == 0 && rep.rank_out[3] == top &&
                       rep.cohomology[3] + top == rep.dims[3];
  return out;
}

SystemDef specialize(const SystemDef& s, const std::string& name, const RationalFunction& value) {
  auto idx = s.ctx->index_of(name);
  if (!idx || s.ctx->is_base(*idx)) throw UnknownVariable(name);
  if (value.depends_on(*idx)) throw Error("a parameter cannot be specialized to an expression in itself");
  std::vector<std::string> params;
  for (const auto& p : s.ctx->params())
    if (p != name) params.push_back(p);
  auto ctx = make_context(s.ctx->base_vars(), params);
  OpMatrix m(ctx, s.matrix.rows(), s.matrix.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) {
      std::vector<DiffOp::Term> terms;
      for (const auto& t : s.matrix.at(i, j).terms())
        terms.push_back({t.mu, t.coef.substitute(*idx, value).drop_variable(*idx)});
      m.at(i, j) = DiffOp::from_terms(std::move(terms));
    }
  SystemDef out = s;
  out.ctx = ctx;
  out.matrix = std::move(m);
  return out;
}

SystemDef specialize(const SystemDef& s, const std::string& name, const Rational& value) {
  return specialize(s, name, RationalFunction(value));
}

SystemDef rename_parameter(const SystemDef& s, const std::string& from, const std::string& to) {
  auto idx = s.ctx->index_of(from);
  if (!idx || s.ctx->is_base(*idx)) throw UnknownVariable(from);
  std::vector<std::string> params = s.ctx->params();
  params[*idx - s.ctx->n()] = to;
  SystemDef out = s;
  out.ctx = make_context(s.ctx->base_vars(), params);
  out.matrix = OpMatrix(out.ctx, s.matrix.cols(), s.matrix.row_list());
  return out;
}

std::vector<std::string> catalog_names() {
  return {"killing", "conformal_killing", "riemann", "bianchi", "ricci", "einstein", "trace_flip", "div",
          "cauchy", "airy", "beltrami", "beltrami_weighted", "vessiot", "vessiot_cc", "pendulum", "pendulum_equal"};
}

SystemDef catalog_system(const std::string& name, std::size_t n, bool minkowski, const Budget& budget) {
  MetricSpec m = minkowski ? MetricSpec::minkowski(n) : MetricSpec::euclidean(n);
  if (name == "killing") return killing(m);
  if (name == "conformal_killing" || name == "conformal") return conformal_killing(m);
  if (name == "riemann") return riemann(m, budget);
  if (name == "bianchi") return bianchi(m, budget);
  if (name == "ricci") return ricci(m);
  if (name == "einstein") return einstein(m);
  if (name == "trace_flip") return trace_flip(m);
  if (name == "div") return divergence(m);
  if (name == "cauchy") return cauchy(m);
  if (name == "airy") return airy();
  if (name == "beltrami") return beltrami(false);
  if (name == "beltrami_weighted") return beltrami(true);
  if (name == "vessiot") return vessiot(std::nullopt);
  if (name == "vessiot_cc") return vessiot_cc(std::nullopt);
  if (name == "pendulum") return double_pendulum(false);
  if (name == "pendulum_equal") return double_pendulum(true);
  throw Error("unknown catalog system: " + name);
}

}  // namespace dopalg
