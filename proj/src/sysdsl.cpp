#include "dopalg/sysdsl.hpp"

#include <algorithm>
#include <cctype>
#include <set>
#include <sstream>

#include "dopalg/report.hpp"

namespace dopalg {

namespace {

std::string located(const SourceSpan& s, const std::string& msg) {
  return "line " + std::to_string(s.line) + ", column " + std::to_string(s.column) + ": " + msg;
}

constexpr std::size_t kMaxDepth = 200;
constexpr std::size_t kMaxDigits = 400;
constexpr long kMaxPower = 255;
// Coefficients larger than this are rejected rather than expanded.
constexpr std::size_t kMaxCoefTerms = 2000;

enum class Tok { ident, number, sym, dopen, end };

struct Token {
  Tok kind;
  std::string text;
  SourceSpan span;
  std::string doc;  // comment lines directly above the token
};

class Lexer {
 public:
  explicit Lexer(std::string_view src) : src_(src) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    for (;;) {
      skip_space();
      SourceSpan at{pos_, 0, line_, col_};
      if (pos_ >= src_.size()) {
        emit(out, {Tok::end, "", at, {}});
        return out;
      }
      unsigned char c = static_cast<unsigned char>(src_[pos_]);
      if (c >= 0x80) fail(at, "non-ASCII character outside a comment");
      if (std::isalpha(c) || c == '_') {
        std::size_t b = pos_;
        while (pos_ < src_.size() && (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_')) advance();
        std::string word(src_.substr(b, pos_ - b));
        if (word == "d" && pos_ < src_.size() && src_[pos_] == '[') {
          advance();
          at.length = 2;
          emit(out, {Tok::dopen, "d[", at, {}});
          continue;
        }
        at.length = word.size();
        emit(out, {Tok::ident, std::move(word), at, {}});
        continue;
      }
      if (std::isdigit(c)) {
        std::size_t b = pos_;
        while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) advance();
        if (pos_ + 1 < src_.size() && src_[pos_] == '.' && std::isdigit(static_cast<unsigned char>(src_[pos_ + 1])))
          fail(at, "decimal literals are not supported; write a fraction");
        at.length = pos_ - b;
        if (at.length > kMaxDigits) fail(at, "numeric literal is too long");
        emit(out, {Tok::number, std::string(src_.substr(b, at.length)), at, {}});
        continue;
      }
      if (std::string_view(";{}[]()+-*/^,:").find(char(c)) != std::string_view::npos) {
        advance();
        at.length = 1;
        emit(out, {Tok::sym, std::string(1, char(c)), at, {}});
        continue;
      }
      fail(at, std::string("unexpected character '") + char(c) + "'");
    }
  }

 private:
  void emit(std::vector<Token>& out, Token t) {
    t.doc = std::move(doc_);
    doc_.clear();
    out.push_back(std::move(t));
  }

  void advance() {
    if (src_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }

  void skip_space() {
    std::size_t newlines = 0;
    while (pos_ < src_.size()) {
      char c = src_[pos_];
      if (c == '#') {
        if (newlines > 1) doc_.clear();
        newlines = 0;
        advance();
        if (pos_ < src_.size() && src_[pos_] == ' ') advance();
        std::size_t b = pos_;
        while (pos_ < src_.size() && src_[pos_] != '\n') advance();
        if (!doc_.empty()) doc_ += '\n';
        doc_ += src_.substr(b, pos_ - b);
      } else if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
        if (c == '\n') ++newlines;
        advance();
      } else {
        break;
      }
    }
    if (newlines > 1) doc_.clear();
  }

  [[noreturn]] void fail(SourceSpan at, const std::string& msg) {
    at.length = 1;
    throw ParseError(ParseError::Kind::lexical, at, msg);
  }

  std::string_view src_;
  std::size_t pos_ = 0, line_ = 1, col_ = 1;
  std::string doc_;
};

SourceSpan join(const SourceSpan& a, const SourceSpan& b) {
  SourceSpan s = a;
  s.length = b.offset + b.length - a.offset;
  return s;
}

// Value of a subexpression: a scalar of the coefficient field, an operator
// still waiting for its unknown, or a linear form in the unknowns.
struct Value {
  enum Kind { scalar, op, row } kind = scalar;
  RationalFunction s;
  DiffOp p;
  Row r;
  SourceSpan span;
};

const std::set<std::string, std::less<>> kReserved = {"vars", "params", "unknowns", "system", "eq", "d"};

class Parser {
 public:
  explicit Parser(std::vector<Token> toks) : toks_(std::move(toks)) {}

  std::vector<SystemDef> run() {
    while (peek_ident("vars") || peek_ident("params") || peek_ident("unknowns")) declaration();
    if (peek().kind == Tok::end) syntax(peek(), "expected at least one system");
    while (peek().kind != Tok::end) {
      if (peek_ident("vars") || peek_ident("params") || peek_ident("unknowns"))
        syntax(peek(), "declarations must precede the systems");
      system();
    }
    return std::move(systems_);
  }

 private:
  // ------------------------------------------------------------ token access
  const Token& peek(std::size_t k = 0) const { return toks_[std::min(i_ + k, toks_.size() - 1)]; }
  const Token& next() {
    const Token& t = toks_[i_];
    if (i_ + 1 < toks_.size()) ++i_;
    return t;
  }
  bool peek_sym(char c) const { return peek().kind == Tok::sym && peek().text[0] == c; }
  bool peek_ident(std::string_view w) const { return peek().kind == Tok::ident && peek().text == w; }
  const Token& expect_sym(char c) {
    if (!peek_sym(c)) syntax(peek(), std::string("expected '") + c + "'");
    return next();
  }
  const Token& expect_ident(const char* what) {
    if (peek().kind != Tok::ident) syntax(peek(), std::string("expected ") + what);
    return next();
  }

  [[noreturn]] static void syntax(const Token& t, const std::string& msg) {
    std::string found = t.kind == Tok::end ? "end of input" : "'" + t.text + "'";
    throw ParseError(ParseError::Kind::syntax, t.span, msg + ", found " + found);
  }
  [[noreturn]] static void semantic(const SourceSpan& s, const std::string& msg) {
    throw ParseError(ParseError::Kind::semantic, s, msg);
  }

  // ------------------------------------------------------------ declarations
  void declaration() {
    const Token& kw = next();
    std::vector<std::string>& list = kw.text == "vars" ? vars_ : kw.text == "params" ? params_ : unknowns_;
    if (peek_sym(';')) syntax(peek(), "expected a name");
    while (!peek_sym(';')) {
      const Token& t = expect_ident("a name");
      if (kReserved.count(t.text)) semantic(t.span, "'" + t.text + "' is reserved");
      if (!names_.insert(t.text).second) semantic(t.span, "'" + t.text + "' is declared twice");
      list.push_back(t.text);
    }
    next();
  }

  void ensure_context(const Token& at) {
    if (ctx_) return;
    if (vars_.empty()) semantic(at.span, "no variables declared");
    if (unknowns_.empty()) semantic(at.span, "no unknowns declared");
    if (vars_.size() > kMaxBaseVars) semantic(at.span, "at most 8 variables are supported");
    if (vars_.size() + params_.size() > kMaxVars) semantic(at.span, "at most 16 variables and parameters are supported");
    ctx_ = make_context(vars_, params_);
  }

  // ----------------------------------------------------------------- systems
  void system() {
    const Token& kw = peek();
    if (!peek_ident("system")) syntax(kw, "expected 'system'");
    next();
    ensure_context(kw);
    const Token& name = expect_ident("a system name");
    if (kReserved.count(name.text)) semantic(name.span, "'" + name.text + "' is reserved");
    if (!system_names_.insert(name.text).second) semantic(name.span, "system '" + name.text + "' is defined twice");
    expect_sym('{');
    std::vector<Row> rows;
    std::vector<std::string> labels;
    std::set<std::string> seen;
    // An empty body is the zero-row operator.
    while (!peek_sym('}')) {
      if (!peek_ident("eq")) syntax(peek(), "expected 'eq'");
      next();
      std::string label = "e" + std::to_string(rows.size() + 1);
      if (peek().kind == Tok::ident) {
        const Token& l = next();
        label = l.text;
        if (!seen.insert(label).second) semantic(l.span, "equation '" + label + "' is labelled twice");
      }
      expect_sym(':');
      depth_ = 0;
      Value v = sum();
      if (v.kind != Value::row) semantic(v.span, "equation does not involve any unknown");
      expect_sym(';');
      rows.push_back(std::move(v.r));
      labels.push_back(std::move(label));
    }
    next();
    SystemDef s{name.text, ctx_, unknowns_, std::move(labels), OpMatrix(ctx_, unknowns_.size(), std::move(rows)),
                kw.doc, std::vector<Rational>(unknowns_.size(), Rational(1)), {}};
    s.equation_weights.assign(s.equations.size(), Rational(1));
    systems_.push_back(std::move(s));
  }

  // ------------------------------------------------------------- expressions
  struct DepthGuard {
    Parser& p;
    explicit DepthGuard(Parser& parser) : p(parser) {
      if (++p.depth_ > kMaxDepth) syntax(p.peek(), "expression nested too deeply");
    }
    ~DepthGuard() { --p.depth_; }
  };

  Value sum() {
    DepthGuard g(*this);
    Value acc = product();
    while (peek_sym('+') || peek_sym('-')) {
      bool minus = next().text[0] == '-';
      Value rhs = product();
      if (minus) rhs = negate(std::move(rhs));
      acc = add(std::move(acc), std::move(rhs));
    }
    return acc;
  }

  bool starts_atom() const {
    return peek().kind == Tok::ident || peek().kind == Tok::dopen || peek_sym('(');
  }

  Value product() {
    DepthGuard g(*this);
    Value acc = unary();
    for (;;) {
      if (peek_sym('*')) {
        next();
        acc = mul(std::move(acc), unary());
      } else if (peek_sym('/')) {
        next();
        acc = divide(std::move(acc), unary());
      } else if (starts_atom()) {
        acc = mul(std::move(acc), unary());
      } else {
        return acc;
      }
    }
  }

  Value unary() {
    DepthGuard g(*this);
    if (peek_sym('-') || peek_sym('+')) {
      const Token& t = next();
      Value v = unary();
      v.span = join(t.span, v.span);
      return t.text[0] == '-' ? negate(std::move(v)) : v;
    }
    return power();
  }

  Value power() {
    Value base = atom();
    if (!peek_sym('^')) return base;
    next();
    bool neg = false;
    if (peek_sym('-')) {
      next();
      neg = true;
    }
    if (peek().kind != Tok::number) syntax(peek(), "expected an integer exponent");
    const Token& e = next();
    if (base.kind != Value::scalar) semantic(base.span, "only coefficients can be raised to a power; repeat derivatives inside d[...]");
    if (e.text.size() > 3 || std::stol(e.text) > kMaxPower) semantic(e.span, "exponent is too large");
    long k = std::stol(e.text);
    base.span = join(base.span, e.span);
    guarded(base.span, [&] {
      RationalFunction acc(1);
      for (long i = 0; i < k; ++i) {
        acc *= base.s;
        check_size(acc);
      }
      base.s = neg ? acc.inverse() : acc;
    });
    return base;
  }

  Value atom() {
    const Token& t = peek();
    Value v;
    v.span = t.span;
    if (t.kind == Tok::number) {
      next();
      v.s = RationalFunction(Rational(mpz_class(t.text)));
      return v;
    }
    if (t.kind == Tok::ident) {
      next();
      if (auto idx = ctx_->index_of(t.text)) {
        v.s = RationalFunction::variable(*idx);
        return v;
      }
      auto it = std::find(unknowns_.begin(), unknowns_.end(), t.text);
      if (it == unknowns_.end()) semantic(t.span, "undeclared symbol '" + t.text + "'");
      v.kind = Value::row;
      v.r.assign(unknowns_.size(), DiffOp());
      v.r[std::size_t(it - unknowns_.begin())] = DiffOp(1);
      return v;
    }
    if (t.kind == Tok::dopen) {
      next();
      Deriv mu;
      do {
        const Token& var = expect_ident("a variable");
        auto idx = ctx_->index_of(var.text);
        if (!idx || !ctx_->is_base(*idx)) semantic(var.span, "'" + var.text + "' is not a declared variable");
        if (mu.e[*idx] >= 60) semantic(var.span, "derivative order is too high");
        ++mu.e[*idx];
      } while (peek_sym(',') && (next(), true));
      const Token& close = expect_sym(']');
      v.kind = Value::op;
      v.p = DiffOp::monomial(mu);
      v.span = join(t.span, close.span);
      return v;
    }
    if (peek_sym('(')) {
      next();
      Value inner = sum();
      const Token& close = expect_sym(')');
      inner.span = join(t.span, close.span);
      return inner;
    }
    syntax(t, "expected a number, a name, d[...] or '('");
  }

  template <class F>
  void guarded(const SourceSpan& span, F&& f) {
    try {
      f();
    } catch (const ParseError&) {
      throw;
    } catch (const Error& e) {
      semantic(span, e.what());
    }
  }

  static void check_size(const RationalFunction& f) {
    if (f.is_constant()) return;
    if (f.numerator().terms().size() + f.denominator().terms().size() > kMaxCoefTerms)
      throw ResourceBudgetExceeded("coefficient expression is too large");
  }

  static Value negate(Value v) {
    switch (v.kind) {
      case Value::scalar: v.s = -v.s; break;
      case Value::op: v.p = v.p.scaled_left(RationalFunction(-1)); break;
      case Value::row:
        for (auto& e : v.r) e = e.scaled_left(RationalFunction(-1));
        break;
    }
    return v;
  }

  static DiffOp as_op(const Value& v) { return v.kind == Value::op ? v.p : DiffOp(v.s); }

  Value add(Value a, Value b) {
    SourceSpan span = join(a.span, b.span);
    if ((a.kind == Value::row) != (b.kind == Value::row)) {
      const Value& bad = a.kind == Value::row ? b : a;
      semantic(bad.span, "term does not involve an unknown");
    }
    Value r;
    r.span = span;
    guarded(span, [&] {
      if (a.kind == Value::row) {
        r.kind = Value::row;
        r.r = std::move(a.r);
        for (std::size_t j = 0; j < r.r.size(); ++j) r.r[j] += b.r[j];
      } else if (a.kind == Value::scalar && b.kind == Value::scalar) {
        r.s = a.s + b.s;
        check_size(r.s);
      } else {
        r.kind = Value::op;
        r.p = as_op(a);
        r.p += as_op(b);
      }
    });
    return r;
  }

  Value mul(Value a, Value b) {
    SourceSpan span = join(a.span, b.span);
    if (a.kind == Value::row) semantic(b.span, "an unknown must end its term");
    Value r;
    r.span = span;
    guarded(span, [&] {
      if (a.kind == Value::scalar && b.kind == Value::scalar) {
        r.s = a.s * b.s;
        check_size(r.s);
      } else if (b.kind == Value::row) {
        r.kind = Value::row;
        r.r = std::move(b.r);
        DiffOp left = as_op(a);
        for (auto& e : r.r)
          if (!e.is_zero()) e = left * e;
      } else {
        r.kind = Value::op;
        r.p = as_op(a) * as_op(b);
        if (r.p.order() > 120) throw ResourceBudgetExceeded("derivative order overflow");
      }
    });
    return r;
  }

  // x / s scales the whole of x by 1/s from the left.
  Value divide(Value a, Value b) {
    if (b.kind != Value::scalar) semantic(b.span, "can only divide by a coefficient");
    if (b.s.is_zero()) semantic(b.span, "division by zero");
    SourceSpan span = join(a.span, b.span);
    Value inv;
    guarded(span, [&] { inv.s = b.s.inverse(); });
    inv.span = b.span;
    Value r = a.kind == Value::row ? mul(std::move(inv), std::move(a)) : a.kind == Value::scalar ? mul(std::move(a), std::move(inv)) : mul(std::move(inv), std::move(a));
    r.span = span;
    return r;
  }

  std::vector<Token> toks_;
  std::size_t i_ = 0;
  std::size_t depth_ = 0;
  std::vector<std::string> vars_, params_, unknowns_;
  std::set<std::string> names_, system_names_;
  ContextPtr ctx_;
  std::vector<SystemDef> systems_;
};

bool needs_parens(const RationalFunction& c, const std::string& text) {
  if (c.is_constant()) return false;
  return text.find_first_of("+-/ ") != std::string::npos;
}

std::string deriv_string(const Deriv& mu, const VarContext& ctx) {
  std::string out = "d[";
  bool first = true;
  for (std::size_t v = 0; v < ctx.n(); ++v)
    for (unsigned k = 0; k < mu.e[v]; ++k) {
      if (!first) out += ",";
      out += ctx.name(v);
      first = false;
    }
  return out + "]";
}

std::string join_names(const std::vector<std::string>& names) {
  std::string out;
  for (const auto& n : names) out += " " + n;
  return out;
}

}  // namespace

ParseError::ParseError(Kind kind, SourceSpan span, const std::string& message)
    : Error(located(span, message)), kind_(kind), span_(span), detail_(message) {}

std::vector<SystemDef> parse(std::string_view text) {
  Parser p(Lexer(text).run());
  return p.run();
}

SystemDef parse_single(std::string_view text) {
  auto all = parse(text);
  if (all.size() != 1) throw Error("expected exactly one system, found " + std::to_string(all.size()));
  return std::move(all.front());
}

std::string equation_string(const SystemDef& s, std::size_t row) {
  const VarContext& ctx = s.matrix.ctx();
  std::string out;
  for (std::size_t j = 0; j < s.matrix.cols(); ++j) {
    for (const auto& t : s.matrix.at(row, j).terms()) {
      bool neg = false;
      std::string coef;
      if (t.coef.is_constant()) {
        Rational c = t.coef.constant();
        neg = sgn(c) < 0;
        if (neg) c = -c;
        if (c != 1) coef = c.get_str() + "*";
      } else {
        std::string c = t.coef.to_string(ctx);
        coef = (needs_parens(t.coef, c) ? "(" + c + ")" : c) + "*";
      }
      if (out.empty()) out = neg ? "-" : "";
      else out += neg ? " - " : " + ";
      out += coef;
      if (t.mu.order() > 0) out += deriv_string(t.mu, ctx);
      out += s.unknowns[j];
    }
  }
  return out.empty() ? "0*" + s.unknowns.front() : out;
}

std::string print(const SystemDef& s, PrintFormat format) {
  s.validate();
  const VarContext& ctx = s.matrix.ctx();
  std::ostringstream os;
  switch (format) {
    case PrintFormat::dsl: {
      os << "vars" << join_names(ctx.base_vars()) << ";\n";
      if (ctx.num_params()) os << "params" << join_names(ctx.params()) << ";\n";
      os << "unknowns" << join_names(s.unknowns) << ";\n";
      if (!s.note.empty()) {
        std::istringstream lines(s.note);
        for (std::string l; std::getline(lines, l);) os << "# " << l << "\n";
      }
      os << "system " << s.name << " {\n";
      for (std::size_t i = 0; i < s.matrix.rows(); ++i)
        os << "  eq " << s.equations[i] << ": " << equation_string(s, i) << ";\n";
      os << "}\n";
      break;
    }
    case PrintFormat::json:
      os << report::system_json(s).dump(2) << "\n";
      break;
    case PrintFormat::text: {
      os << s.name;
      if (!s.note.empty()) os << ": " << s.note;
      os << "\n";
      std::size_t w = 0;
      for (const auto& e : s.equations) w = std::max(w, e.size());
      for (std::size_t i = 0; i < s.matrix.rows(); ++i)
        os << "  " << s.equations[i] << std::string(w - s.equations[i].size(), ' ') << " = " << equation_string(s, i)
           << "\n";
      break;
    }
  }
  return os.str();
}

}  // namespace dopalg
