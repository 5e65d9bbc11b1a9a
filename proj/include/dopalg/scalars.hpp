#pragma once

// Exact arithmetic in the coefficient field K = Q(params)(x1..xn).
//
// Variables are addressed by a global index: base (differentiation) variables
// come first, parameters after them. A Poly does not carry its context; the
// VarContext is attached at the matrix / system level.

#include <gmpxx.h>

#include <array>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace dopalg {

inline constexpr std::size_t kMaxVars = 16;
inline constexpr std::size_t kMaxBaseVars = 8;

using Rational = mpq_class;

std::string to_string(const Rational& q);

class VarContext {
 public:
  VarContext(std::vector<std::string> base_vars, std::vector<std::string> params = {});

  std::size_t n() const { return base_.size(); }
  std::size_t num_params() const { return params_.size(); }
  std::size_t size() const { return base_.size() + params_.size(); }
  const std::vector<std::string>& base_vars() const { return base_; }
  const std::vector<std::string>& params() const { return params_; }
  const std::string& name(std::size_t index) const;
  std::optional<std::size_t> index_of(std::string_view name) const;
  bool is_base(std::size_t index) const { return index < base_.size(); }

  bool operator==(const VarContext&) const = default;

 private:
  std::vector<std::string> base_;
  std::vector<std::string> params_;
};

using ContextPtr = std::shared_ptr<const VarContext>;

ContextPtr make_context(std::vector<std::string> base_vars, std::vector<std::string> params = {});

struct Exponents {
  std::array<std::uint16_t, kMaxVars> e{};

  unsigned degree() const;
  bool operator==(const Exponents&) const = default;
};

// Degree-lexicographic comparison, variable 0 most significant. Returns <0, 0, >0.
int compare_deglex(const Exponents& a, const Exponents& b);

class Poly {
 public:
  struct Term {
    Exponents exp;
    Rational coef;
  };

  Poly() = default;
  explicit Poly(Rational c);
  static Poly variable(std::size_t index);
  static Poly monomial(const Exponents& exp, Rational c);

  bool is_zero() const { return terms_.empty(); }
  bool is_constant() const;
  // Value of a constant polynomial (0 for the zero polynomial).
  Rational constant_value() const;
  const std::vector<Term>& terms() const { return terms_; }
  // Largest term under deglex. Undefined on zero.
  const Term& leading() const { return terms_.front(); }

  unsigned total_degree() const;
  unsigned degree_in(std::size_t var) const;
  bool depends_on(std::size_t var) const;
  bool depends_on_range(std::size_t first, std::size_t last) const;

  Poly operator-() const;
  Poly& operator+=(const Poly& o);
  Poly& operator-=(const Poly& o);
  friend Poly operator+(Poly a, const Poly& b) { return a += b; }
  friend Poly operator-(Poly a, const Poly& b) { return a -= b; }
  friend Poly operator*(const Poly& a, const Poly& b);
  Poly scaled(const Rational& c) const;
  Poly pow(unsigned k) const;

  Poly derivative(std::size_t var) const;
  Poly substitute(std::size_t var, const Poly& value) const;
  // Removes an absent variable and shifts the later indices down by one.
  Poly drop_variable(std::size_t var) const;
  // Divides by the leading coefficient; zero stays zero.
  Poly monic() const;

  // Quotient when b divides a exactly, nullopt otherwise.
  static std::optional<Poly> divide_exact(const Poly& a, const Poly& b);

  bool operator==(const Poly& o) const;

  std::string to_string(const VarContext& ctx) const;

 private:
  friend class PolyBuilder;
  std::vector<Term> terms_;  // strictly decreasing deglex, no zero coefficients
};

// Monic greatest common divisor over Q (recursive primitive PRS). gcd(0,0) = 0.
Poly gcd(const Poly& a, const Poly& b);

// Element of K: num/den with gcd(num, den) = 1 and den monic under deglex.
// Constants are stored as a bare rational, so constant-coefficient operators
// never touch the polynomial machinery.
class RationalFunction {
 public:
  RationalFunction() = default;
  RationalFunction(Rational c) : scalar_(std::move(c)) { scalar_.canonicalize(); }  // NOLINT(implicit)
  RationalFunction(long c) : scalar_(c) {}                   // NOLINT(implicit)
  RationalFunction(int c) : scalar_(c) {}                    // NOLINT(implicit)
  explicit RationalFunction(const Poly& p);
  RationalFunction(const Poly& num, const Poly& den);
  static RationalFunction variable(std::size_t index);

  RationalFunction(const RationalFunction& o);
  RationalFunction(RationalFunction&&) noexcept = default;
  RationalFunction& operator=(const RationalFunction& o);
  RationalFunction& operator=(RationalFunction&&) noexcept = default;
  ~RationalFunction();

  bool is_zero() const { return !frac_ && sgn(scalar_) == 0; }
  bool is_constant() const { return !frac_; }
  bool is_one() const { return !frac_ && scalar_ == 1; }
  // Only meaningful when is_constant().
  const Rational& constant() const { return scalar_; }
  Poly numerator() const;
  Poly denominator() const;

  RationalFunction operator-() const;
  RationalFunction& operator+=(const RationalFunction& o);
  RationalFunction& operator-=(const RationalFunction& o);
  RationalFunction& operator*=(const RationalFunction& o);
  RationalFunction& operator/=(const RationalFunction& o);
  friend RationalFunction operator+(RationalFunction a, const RationalFunction& b) { return a += b; }
  friend RationalFunction operator-(RationalFunction a, const RationalFunction& b) { return a -= b; }
  friend RationalFunction operator*(RationalFunction a, const RationalFunction& b) { return a *= b; }
  friend RationalFunction operator/(RationalFunction a, const RationalFunction& b) { return a /= b; }
  RationalFunction inverse() const;
  RationalFunction pow(int k) const;

  RationalFunction derivative(std::size_t var) const;
  bool depends_on(std::size_t var) const;
  bool depends_on_range(std::size_t first, std::size_t last) const;
  RationalFunction substitute(std::size_t var, const RationalFunction& value) const;
  RationalFunction drop_variable(std::size_t var) const;

  bool operator==(const RationalFunction& o) const;

  std::string to_string(const VarContext& ctx) const;

 private:
  struct Frac {
    Poly num;
    Poly den;
  };
  void set_fraction(Poly num, Poly den);
  // num/den already coprime; only normalizes.
  void set_coprime(Poly num, Poly den);
  friend RationalFunction sum(std::span<const RationalFunction> xs);

  Rational scalar_{0};
  std::unique_ptr<Frac> frac_;
};

enum class ArithKind { add, sub, mul, div };

RationalFunction arith(const RationalFunction& a, const RationalFunction& b, ArithKind kind);
// Sum over a common denominator with a single cancellation step; much cheaper
// than folding with + when many terms share denominator factors.
RationalFunction sum(std::span<const RationalFunction> xs);
// Partial derivative with respect to a base variable; throws UnknownVariable otherwise.
RationalFunction diff(const RationalFunction& a, std::size_t var, const VarContext& ctx);
inline bool is_zero(const RationalFunction& a) { return a.is_zero(); }

}  // namespace dopalg
