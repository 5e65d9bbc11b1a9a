#include "acceptance.hpp"

#include <chrono>
#include <cstdio>
#include <random>
#include <sstream>

#include "dopalg/catalog.hpp"
#include "dopalg/homology.hpp"
#include "dopalg/spencer.hpp"
#include "dopalg/sysdsl.hpp"
#include "oracle/graded_oracle.hpp"

namespace acceptance {

using namespace dopalg;

namespace {

struct CcCall {
  std::string label;
  OpMatrix d;
  OpMatrix c;
};

// Everything criteria 2-5 computed with cc(), for the oracle in criterion 9.
struct Context {
  const Options& opt;
  std::vector<CcCall> calls;
};

template <class T>
std::string list(const std::vector<T>& v) {
  std::ostringstream os;
  os << "(";
  for (std::size_t i = 0; i < v.size(); ++i) os << (i ? "," : "") << v[i];
  os << ")";
  return os.str();
}

class Timer {
 public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

std::string secs(double s) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2fs", s);
  return buf;
}

void record_resolution(Context& cx, const std::string& label, const Resolution& r) {
  for (std::size_t k = 0; k + 1 < r.steps.size(); ++k)
    cx.calls.push_back({label + " step " + std::to_string(k + 1), r.steps[k], r.steps[k + 1]});
}

void record_duality(Context& cx, const std::string& label, const DualityReport& d) {
  cx.calls.push_back({label + " cc(ad D1)", d.ad_d1, d.ad_d});
  cx.calls.push_back({label + " cc(D)", d.d, d.d1_prime});
}

std::vector<Rational> ones(std::size_t n) { return std::vector<Rational>(n, Rational(1)); }

// ------------------------------------------------------------------ criterion 1

RationalFunction random_coef(std::mt19937_64& rng, std::size_t n) {
  std::uniform_int_distribution<int> small(-3, 3), kind(0, 9), var(0, int(n) - 1);
  auto poly = [&](int max_deg) {
    std::uniform_int_distribution<int> deg(0, max_deg);
    RationalFunction p(small(rng));
    int terms = 1 + kind(rng) % 3;
    for (int t = 0; t < terms; ++t) {
      RationalFunction m(small(rng));
      for (int e = deg(rng); e > 0; --e) m *= RationalFunction::variable(std::size_t(var(rng)));
      p += m;
    }
    return p;
  };
  int k = kind(rng);
  if (k < 4) return RationalFunction(small(rng));
  if (k < 8) return poly(2);
  // Linear denominators: products of several order-3 operators already
  // raise them to high powers.
  RationalFunction den = poly(1);
  if (den.is_zero()) den = RationalFunction(1);
  return poly(2) / den;
}

DiffOp random_op(std::mt19937_64& rng, std::size_t n) {
  std::uniform_int_distribution<int> terms(0, 3), ord(0, 3), var(0, int(n) - 1);
  DiffOp p;
  for (int t = terms(rng); t > 0; --t) {
    Deriv mu;
    for (int k = ord(rng); k > 0; --k) ++mu.e[std::size_t(var(rng))];
    p += DiffOp::monomial(mu).scaled_left(random_coef(rng, n));
  }
  return p;
}

OpMatrix random_matrix(std::mt19937_64& rng, const ContextPtr& ctx, std::size_t r, std::size_t c) {
  OpMatrix m(ctx, r, c);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < c; ++j) m.at(i, j) = random_op(rng, ctx->n());
  return m;
}

void criterion1(Context& cx, CriterionResult& res) {
  std::mt19937_64 rng(cx.opt.seed);
  std::uniform_int_distribution<int> dim(1, 3);
  std::vector<ContextPtr> ctxs = {make_context({"x1"}), make_context({"x1", "x2"}), make_context({"x1", "x2", "x3"})};
  int bad_inv = 0, bad_anti = 0;
  for (int trial = 0; trial < 500; ++trial) {
    const ContextPtr& ctx = ctxs[std::size_t(dim(rng) - 1)];
    std::size_t p = std::size_t(dim(rng)), q = std::size_t(dim(rng)), r = std::size_t(dim(rng));
    OpMatrix a = random_matrix(rng, ctx, p, q), b = random_matrix(rng, ctx, q, r);
    if (!(adjoint_matrix(adjoint_matrix(a)) == a)) ++bad_inv;
    if (!(adjoint_matrix(a * b) == adjoint_matrix(b) * adjoint_matrix(a))) ++bad_anti;
  }
  res.pass = bad_inv == 0 && bad_anti == 0;
  res.detail = "500 random pairs: " + std::to_string(bad_inv) + " involution failures, " + std::to_string(bad_anti) +
               " antihomomorphism failures";
}

// -------------------------------------------------------------- criteria 2, 3

struct ChainCase {
  std::size_t n;
  std::vector<std::size_t> ranks;
  std::vector<int> orders;  // empty: only check the ones listed in order_checks
  std::vector<std::pair<std::size_t, int>> order_checks;
  double limit;
};

bool check_chain(Context& cx, const std::string& label, const OpMatrix& d, const ChainCase& cc, std::string& detail) {
  Timer t;
  Resolution r = resolve(d, 10, cx.opt.budget);
  double s = t.seconds();
  record_resolution(cx, label, r);
  long chi = r.terminated ? euler_characteristic(r, long(cc.n)) : -1;
  bool ok = r.terminated && r.ranks() == cc.ranks && chi == 0 && s < cc.limit;
  if (!cc.orders.empty()) ok = ok && r.orders() == cc.orders;
  for (auto [idx, ord] : cc.order_checks) ok = ok && idx < r.orders().size() && r.orders()[idx] == ord;
  detail += (detail.empty() ? "" : "; ") + label + " ranks " + list(r.ranks()) + " orders " + list(r.orders()) +
            " euler " + std::to_string(chi) + " " + secs(s);
  return ok;
}

void criterion2(Context& cx, CriterionResult& res) {
  std::vector<ChainCase> cases = {
      {2, {3, 1, 0}, {1, 2}, {}, 60},
      {3, {6, 6, 3, 0}, {1, 2, 1}, {}, 60},
      {4, {10, 20, 20, 6, 0}, {1, 2, 1, 1}, {}, 60},
  };
  res.pass = true;
  for (const auto& c : cases)
    res.pass &= check_chain(cx, "n=" + std::to_string(c.n), killing(MetricSpec::euclidean(c.n)).matrix, c, res.detail);
}

void criterion3(Context& cx, CriterionResult& res) {
  std::vector<ChainCase> cases = {
      {3, {5, 5, 3, 0}, {}, {{1, 3}}, 300},
      {4, {9, 10, 9, 4, 0}, {1, 2, 2, 1}, {}, 300},
      {5, {14, 35, 35, 14, 5, 0}, {1, 2, 1, 2, 1}, {}, 1800},
  };
  res.pass = true;
  for (const auto& c : cases)
    res.pass &=
        check_chain(cx, "n=" + std::to_string(c.n), conformal_killing(MetricSpec::euclidean(c.n)).matrix, c, res.detail);
}

// ------------------------------------------------------------------ criterion 4

void criterion4(Context& cx, CriterionResult& res) {
  const Budget& b = cx.opt.budget;
  res.pass = true;
  std::string d;
  for (std::size_t n = 2; n <= 4; ++n) {
    auto m = MetricSpec::euclidean(n);
    OpMatrix adk = weight_rescale(adjoint_matrix(killing(m).matrix), ones(n), sym_weights(n));
    bool eq = module_equal(adk, cauchy(m).matrix, b);
    res.pass &= eq;
    d += "ad(killing " + std::to_string(n) + ")=cauchy " + (eq ? "yes" : "no") + "; ";
  }
  auto d2 = duality_test(cauchy(MetricSpec::euclidean(2)).matrix, b);
  record_duality(cx, "cauchy n=2", d2);
  bool airy_ok = d2.parametrizable && image_equal(d2.d, airy().matrix, b);
  d += std::string("cauchy n=2 parametrized by airy ") + (airy_ok ? "yes" : "no") + "; ";

  auto d3 = duality_test(cauchy(MetricSpec::euclidean(3)).matrix, b);
  record_duality(cx, "cauchy n=3", d3);
  SystemDef r3 = riemann(MetricSpec::euclidean(3), b);
  std::vector<Rational> winv;
  for (const auto& w : sym_weights(3)) winv.push_back(1 / w);
  OpMatrix adr = weight_rescale(adjoint_matrix(r3.matrix), winv, ones(r3.matrix.rows()));
  bool pot_ok = d3.parametrizable && d3.d.cols() == 6 && image_equal(d3.d, adr, b);
  d += "cauchy n=3 parametrized by " + std::to_string(d3.d.cols()) + " potentials = ad(riemann 3) " +
       (pot_ok ? "yes" : "no") + "; ";

  OpMatrix bw = beltrami(true).matrix;
  bool selfadj = adjoint_matrix(bw) == bw;
  d += std::string("weighted beltrami self-adjoint ") + (selfadj ? "yes" : "no");
  res.pass = res.pass && airy_ok && pot_ok && selfadj;
  res.detail = d;
}

// ------------------------------------------------------------------ criterion 5

void criterion5(Context& cx, CriterionResult& res) {
  const Budget& b = cx.opt.budget;
  auto m = MetricSpec::euclidean(4);
  auto w = sym_weights(4);
  SystemDef e = einstein(m), ric = ricci(m), flip = trace_flip(m), r4 = riemann(m, b);
  bool selfadj = weighted_adjoint(e.matrix, w, w) == e.matrix;
  auto dt = duality_test(e.matrix, b);
  record_duality(cx, "einstein n=4", dt);
  bool d1p = !dt.parametrizable && dt.d1_prime.rows() == 20 && module_equal(dt.d1_prime, r4.matrix, b);
  bool factor = e.matrix == flip.matrix * ric.matrix;
  OpMatrix x = e.matrix * flip.matrix;
  bool x_ok = x * flip.matrix == e.matrix;
  bool adx = weighted_adjoint(x, w, w) == ric.matrix && module_equal(weighted_adjoint(x, w, w), ric.matrix, b);
  res.pass = selfadj && d1p && factor && x_ok && adx;
  res.detail = std::string("self-adjoint ") + (selfadj ? "yes" : "no") + "; parametrizable " +
               (dt.parametrizable ? "yes" : "no") + ", D1' has " + std::to_string(dt.d1_prime.rows()) +
               " generators, = riemann " + (d1p ? "yes" : "no") + "; E = C o Ricci " + (factor ? "yes" : "no") +
               "; E = X o C " + (x_ok ? "yes" : "no") + "; ad(X) = ricci " + (adx ? "yes" : "no");
}

// ------------------------------------------------------------------ criterion 6

void criterion6(Context& cx, CriterionResult& res) {
  const Budget& b = cx.opt.budget;
  SystemDef p = double_pendulum(false);
  auto dt = duality_test(p.matrix, b);
  auto vp = verify_parametrization(p.matrix, pendulum_parametrization(p), b);
  bool adj = left_invertible(adjoint_matrix(p.matrix), b);
  SystemDef pe = double_pendulum(true);
  auto de = duality_test(pe.matrix, b, 2);
  const auto& ctx = *pe.ctx;
  DiffOp expected = DiffOp::monomial(Deriv::unit(0) + Deriv::unit(0)).scaled_left(RationalFunction::variable(*ctx.index_of("l")));
  expected += DiffOp(RationalFunction::variable(*ctx.index_of("g")));
  bool ann = false;
  std::string ann_text = "none";
  if (de.torsion.size() == 1 && de.torsion[0].annihilator) {
    const DiffOp& a = *de.torsion[0].annihilator;
    ann_text = a.to_string(ctx);
    RationalFunction ratio = a.leading().coef / expected.leading().coef;
    ann = ratio.is_constant() && a == expected.scaled_left(ratio);
  }
  res.pass = dt.parametrizable && vp.composes_to_zero && vp.generates_all_cc && adj && !de.parametrizable && ann;
  res.detail = std::string("generic parametrizable ") + (dt.parametrizable ? "yes" : "no") + ", phi-parametrization " +
               (vp.composes_to_zero ? "composes" : "does not compose") + " and " +
               (vp.generates_all_cc ? "generates all cc" : "misses cc") + "; adjoint left-invertible " +
               (adj ? "yes" : "no") + "; equal lengths: " + std::to_string(de.torsion.size()) +
               " torsion row(s), annihilator " + ann_text;
}

// ------------------------------------------------------------------ criterion 7

bool witness_ok(const ExtReport& e, const OpMatrix& next, const Budget& b) {
  if (!e.witness) return false;
  if (!row_is_zero(row_times(*e.witness, adjoint_matrix(next)))) return false;
  return !member(*e.witness, e.image_gens, b).is_member;
}

void criterion7(Context& cx, CriterionResult& res) {
  const Budget& b = cx.opt.budget;
  SystemDef v = vessiot(std::nullopt);
  OpMatrix c = cc(v.matrix, b);
  bool cc_ok = c.rows() == 1 && module_equal(c, vessiot_cc(std::nullopt).matrix, b);
  std::string d = "cc " + equation_string(SystemDef{"cc", v.ctx, v.equations, {"r"}, c, "", {}, {}}, 0) +
                  (cc_ok ? " (matches)" : " (mismatch)");
  bool ok = cc_ok;
  for (int cv : {1, 0}) {
    SystemDef s = vessiot(Rational(cv));
    OpMatrix d2 = cc(s.matrix, b);
    OpMatrix d3 = cc(d2, b);
    bool li = left_invertible(adjoint_matrix(d2), b);
    auto e1 = ext_zero(s.matrix, 1, b);
    auto e2 = ext_zero(s.matrix, 2, b);
    bool w1 = !e1.is_zero && witness_ok(e1, d2, b);
    bool want_li = cv != 0;
    bool e2_ok = cv != 0 ? e2.is_zero : (!e2.is_zero && witness_ok(e2, d3, b));
    ok = ok && li == want_li && w1 && e2_ok;
    d += "; c=" + std::to_string(cv) + ": ad(D1) left-invertible " + (li ? "yes" : "no") + ", ext1 " +
         (e1.is_zero ? "= 0" : "!= 0") + (w1 ? " (witness verified)" : "") + ", ext2 " + (e2.is_zero ? "= 0" : "!= 0");
  }
  res.pass = ok;
  res.detail = d;
}

// ------------------------------------------------------------------ criterion 8

void criterion8(Context& cx, CriterionResult& res) {
  bool ok = true;
  std::string d;
  for (std::size_t n = 2; n <= 5; ++n) {
    auto g = killing_symbol(MetricSpec::euclidean(n));
    auto rep = delta_complex(g, n);
    std::size_t h2 = n * n * (n * n - 1) / 12, h3 = n * n * (n * n - 1) * (n - 2) / 24;
    std::size_t got3 = rep.cohomology.size() > 3 ? rep.cohomology[3] : 0;
    bool g2 = prolong(g).dim() == 0;
    ok = ok && rep.cohomology[2] == h2 && got3 == h3 && rep.delta_squared_zero && g2;
    d += "n=" + std::to_string(n) + " H2=" + std::to_string(rep.cohomology[2]) + " H3=" + std::to_string(got3) +
         (g2 ? " g2=0" : " g2!=0") + "; ";
    if (n >= 3) {
      auto cg = prolong(conformal_symbol(MetricSpec::euclidean(n)));
      std::size_t g3 = prolong(cg).dim();
      ok = ok && cg.dim() == n && g3 == 0;
      d += "conformal g2=" + std::to_string(cg.dim()) + " g3=" + std::to_string(g3) + "; ";
    }
  }
  auto lc = lanczos_check(cx.opt.budget);
  bool seq = lc.sequence == std::vector<std::size_t>{20, 24, 4} && lc.sequence_exact;
  ok = ok && seq && lc.lanczos_dim == 20 && lc.h3_dim == 20 && lc.bianchi_composes && lc.adjoint_composes;
  d += "sequence 0->" + std::to_string(lc.sequence[0]) + "->" + std::to_string(lc.sequence[1]) + "->" +
       std::to_string(lc.sequence[2]) + "->0 " + (seq ? "exact" : "not exact") + "; lanczos dim " +
       std::to_string(lc.lanczos_dim);
  res.pass = ok;
  res.detail = d;
}

// ------------------------------------------------------------------ criterion 9

void criterion9(Context& cx, CriterionResult& res) {
  std::size_t checked = 0, skipped = 0, bad = 0;
  std::string first_bad;
  for (const auto& call : cx.calls) {
    auto r = oracle::compare_cc(call.d, call.c);
    if (!r.applicable) {
      ++skipped;
      continue;
    }
    ++checked;
    if (!r.agrees()) {
      ++bad;
      if (first_bad.empty()) first_bad = call.label;
    }
  }
  res.pass = bad == 0 && checked > 0 && skipped == 0;
  res.detail = std::to_string(checked) + " cc calls checked, " + std::to_string(skipped) + " not applicable, " +
               std::to_string(bad) + " disagreements" + (first_bad.empty() ? "" : " (first: " + first_bad + ")");
}

// ----------------------------------------------------------------- criterion 10

void criterion10(Context& cx, CriterionResult& res) {
  std::size_t trips = 0, trip_bad = 0;
  std::vector<std::string> seeds;
  std::string first_bad;
  std::vector<SystemDef> systems;
  for (const auto& name : catalog_names()) {
    bool fixed = name == "airy" || name == "beltrami" || name == "beltrami_weighted" || name.rfind("vessiot", 0) == 0 ||
                 name.rfind("pendulum", 0) == 0;
    for (std::size_t n = fixed ? 0 : 2; n <= (fixed ? 0 : 4); ++n)
      for (bool mk : {false, true}) {
        if (fixed && mk) continue;
        try {
          systems.push_back(catalog_system(name, n, mk, cx.opt.budget));
        } catch (const UnsupportedDimension&) {
        }
      }
  }
  for (const auto& s : systems) {
    ++trips;
    std::string text = print(s, PrintFormat::dsl);
    seeds.push_back(text);
    try {
      SystemDef back = parse_single(text);
      bool same = back.name == s.name && *back.ctx == *s.ctx && back.unknowns == s.unknowns &&
                  back.equations == s.equations && back.matrix == s.matrix && print(back, PrintFormat::dsl) == text;
      if (!same) {
        ++trip_bad;
        if (first_bad.empty()) first_bad = s.name;
      }
    } catch (const Error& e) {
      ++trip_bad;
      if (first_bad.empty()) first_bad = s.name + ": " + e.what();
    }
  }
  auto corpus = fuzz_corpus(seeds, cx.opt.fuzz_cases, cx.opt.seed);
  std::size_t ok = 0, errors = 0, unstructured = 0;
  for (const auto& text : corpus) {
    try {
      parse(text);
      ++ok;
    } catch (const ParseError& e) {
      ++errors;
      if (e.span().line == 0 || e.span().column == 0) ++unstructured;
    } catch (...) {
      ++unstructured;
    }
  }
  res.pass = trip_bad == 0 && unstructured == 0 && corpus.size() == cx.opt.fuzz_cases;
  res.detail = std::to_string(trips) + " catalog round trips, " + std::to_string(trip_bad) + " failed" +
               (first_bad.empty() ? "" : " (" + first_bad + ")") + "; fuzz " + std::to_string(corpus.size()) +
               " inputs: " + std::to_string(ok) + " parsed, " + std::to_string(errors) + " located errors, " +
               std::to_string(unstructured) + " other failures";
}

}  // namespace

std::vector<std::string> fuzz_corpus(const std::vector<std::string>& seeds, std::size_t count, std::uint64_t seed) {
  static const std::vector<std::string> kTokens = {
      "d[", "]", "^", "^-300", "^999", "/0", "/(x1-x1)", "(", ")", "eq:", ";", "system s {", "}", "x1", "vars",
      "params", "unknowns", "0", "99999999999999999999", "1.5", "d[x1,x1,x1,x1,x1,x1,x1,x1]", "*", "+", "-",
      "#", "\n", "eq q:", ",", "\xc3\xa9", "d", "__", "((((((((",
  };
  static const std::string kChars = "abcdxyz0123456789_[](){};:,+-*/^#. \n\t\x01\xff";
  std::vector<std::string> out;
  if (seeds.empty()) return out;
  std::mt19937_64 rng(seed);
  auto pick = [&](std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng); };
  while (out.size() < count) {
    std::string s = seeds[pick(seeds.size())];
    std::size_t edits = 1 + pick(4);
    for (std::size_t e = 0; e < edits; ++e) {
      std::size_t len = s.size();
      std::size_t pos = len ? pick(len + 1) : 0;
      switch (pick(7)) {
        case 0:
          if (len) s.erase(std::min(pos, len - 1), 1 + pick(5));
          break;
        case 1: s.insert(pos, 1, kChars[pick(kChars.size())]); break;
        case 2:
          if (len) {
            std::size_t a = pick(len), l = 1 + pick(std::min<std::size_t>(40, len - a));
            s.insert(pos, s.substr(a, l));
          }
          break;
        case 3:
          if (len > 1) std::swap(s[pick(len)], s[pick(len)]);
          break;
        case 4:
          if (len) s[std::min(pos, len - 1)] = kChars[pick(kChars.size())];
          break;
        case 5: s.resize(pos); break;
        default: s.insert(pos, kTokens[pick(kTokens.size())]); break;
      }
    }
    out.push_back(std::move(s));
  }
  return out;
}

std::string format_line(const CriterionResult& r) {
  char head[160];
  std::snprintf(head, sizeof head, "%s criterion %d %s (%.2fs, limit %.0fs%s): ", r.pass ? "PASS" : "FAIL", r.id,
                r.name.c_str(), r.seconds, r.limit_seconds, r.budget_exceeded ? ", budget exceeded" : "");
  return head + r.detail;
}

std::vector<CriterionResult> run_all(const Options& opt, const std::function<void(const CriterionResult&)>& on_result) {
  Context cx{opt, {}};
  struct Spec {
    int id;
    const char* name;
    double limit;
    void (*fn)(Context&, CriterionResult&);
  };
  const Spec specs[] = {
      {1, "adjoint involution and antihomomorphism", 10, criterion1},
      {2, "killing chains", 180, criterion2},
      {3, "conformal killing chains", 2400, criterion3},
      {4, "cauchy, airy and beltrami identities", 120, criterion4},
      {5, "einstein operator", 300, criterion5},
      {6, "double pendulum", 30, criterion6},
      {7, "vessiot structure family", 120, criterion7},
      {8, "spencer cohomology and lanczos space", 60, criterion8},
      {9, "oracle agreement of constant-coefficient cc", 600, criterion9},
      {10, "dsl robustness and round trip", 600, criterion10},
  };
  std::vector<CriterionResult> out;
  for (const auto& s : specs) {
    CriterionResult r;
    r.id = s.id;
    r.name = s.name;
    r.limit_seconds = s.limit;
    Timer t;
    try {
      s.fn(cx, r);
    } catch (const ResourceBudgetExceeded& e) {
      r.pass = false;
      r.budget_exceeded = true;
      r.detail = e.what();
    } catch (const std::exception& e) {
      r.pass = false;
      r.detail = std::string("error: ") + e.what();
    }
    r.seconds = t.seconds();
    if (r.seconds > r.limit_seconds) r.pass = false;
    out.push_back(r);
    if (on_result) on_result(r);
  }
  return out;
}

}  // namespace acceptance
