#pragma once

// The operator ring D = K[d1..dn] with d_i a = a d_i + da/dx_i, and matrices
// over it. Every DiffOp is kept in normal form: coefficients on the left of
// the derivative monomials.

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "dopalg/scalars.hpp"

namespace dopalg {

// Derivative multi-index mu in N^n (n <= kMaxBaseVars).
struct Deriv {
  std::array<std::uint8_t, kMaxBaseVars> e{};

  static Deriv unit(std::size_t var);
  unsigned order() const;
  bool operator==(const Deriv&) const = default;
};

Deriv operator+(const Deriv& a, const Deriv& b);
// Componentwise a - b; requires divides(b, a).
Deriv operator-(const Deriv& a, const Deriv& b);
bool divides(const Deriv& a, const Deriv& b);
Deriv lcm(const Deriv& a, const Deriv& b);
// Degree-reverse-lexicographic comparison: <0, 0, >0.
int compare_degrevlex(const Deriv& a, const Deriv& b);
// Order-preserving 64-bit key for degrevlex within one total degree.
std::uint64_t revlex_key(const Deriv& a);

class DiffOp {
 public:
  struct Term {
    Deriv mu;
    RationalFunction coef;
  };

  DiffOp() = default;
  DiffOp(RationalFunction c);  // NOLINT(implicit): zero-order operator
  DiffOp(int c) : DiffOp(RationalFunction(c)) {}  // NOLINT(implicit)
  static DiffOp monomial(const Deriv& mu, RationalFunction c = RationalFunction(1));
  static DiffOp d(std::size_t var) { return monomial(Deriv::unit(var)); }
  // Builds a normal form from arbitrary (mu, coef) pairs; merges duplicates.
  static DiffOp from_terms(std::vector<Term> terms);

  bool is_zero() const { return terms_.empty(); }
  // Order of the operator; -1 for the zero operator.
  int order() const;
  const std::vector<Term>& terms() const { return terms_; }
  const Term& leading() const { return terms_.front(); }
  RationalFunction coefficient(const Deriv& mu) const;
  bool has_constant_coefficients() const;
  bool is_homogeneous() const;

  DiffOp operator-() const;
  DiffOp& operator+=(const DiffOp& o);
  DiffOp& operator-=(const DiffOp& o);
  friend DiffOp operator+(DiffOp a, const DiffOp& b) { return a += b; }
  friend DiffOp operator-(DiffOp a, const DiffOp& b) { return a -= b; }
  // Ring product with the Weyl commutation rule.
  friend DiffOp operator*(const DiffOp& p, const DiffOp& q);
  DiffOp scaled_left(const RationalFunction& c) const;

  bool operator==(const DiffOp& o) const;

  std::string to_string(const VarContext& ctx) const;

 private:
  std::vector<Term> terms_;  // strictly decreasing degrevlex, nonzero coefficients
};

// d^alpha * (c d^mu): expands derivatives of c with binomial weights.
DiffOp weyl_shift(const Deriv& alpha, const RationalFunction& c, const Deriv& mu);

DiffOp mul(const DiffOp& p, const DiffOp& q);
DiffOp adjoint(const DiffOp& p);
// Action of the operator on a function: sum a_mu * d^mu f.
RationalFunction apply(const DiffOp& p, const RationalFunction& f);
RationalFunction partial(const RationalFunction& f, const Deriv& mu);

using Row = std::vector<DiffOp>;

// Rectangular matrix over D. Rows are equations, columns unknowns:
// (A xi)_i = sum_k A[i][k] xi^k.
class OpMatrix {
 public:
  OpMatrix() = default;
  OpMatrix(ContextPtr ctx, std::size_t rows, std::size_t cols);
  OpMatrix(ContextPtr ctx, std::size_t cols, std::vector<Row> rows);
  static OpMatrix identity(ContextPtr ctx, std::size_t n);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  const ContextPtr& context() const { return ctx_; }
  const VarContext& ctx() const { return *ctx_; }

  DiffOp& at(std::size_t i, std::size_t j) { return entries_[i * cols_ + j]; }
  const DiffOp& at(std::size_t i, std::size_t j) const { return entries_[i * cols_ + j]; }
  Row row(std::size_t i) const;
  std::vector<Row> row_list() const;
  int order() const;
  int row_order(std::size_t i) const;
  bool is_zero() const;
  bool has_constant_coefficients() const;

  void append_row(const Row& r);
  OpMatrix select_rows(std::span<const std::size_t> idx) const;

  bool operator==(const OpMatrix& o) const;

  std::string to_string() const;

 private:
  ContextPtr ctx_;
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<DiffOp> entries_;
};

// Composition (A o B)[i][j] = sum_k A[i][k] * B[k][j]; requires cols(A) = rows(B).
OpMatrix operator*(const OpMatrix& a, const OpMatrix& b);
OpMatrix operator+(const OpMatrix& a, const OpMatrix& b);
OpMatrix operator-(const OpMatrix& a, const OpMatrix& b);
// ad(A)[i][j] = ad(A[j][i]).
OpMatrix adjoint_matrix(const OpMatrix& a);
// A'[i][j] = row_weights[i] * A[i][j] * col_weights[j].
OpMatrix weight_rescale(const OpMatrix& a, std::span<const Rational> row_weights,
                        std::span<const Rational> col_weights);
// Adjoint with respect to weighted pairings sum w_k u^k v_k on the unknown
// side (unknown_weights) and the equation side (equation_weights):
// W_unknown^-1 ad(A) W_equation.
OpMatrix weighted_adjoint(const OpMatrix& a, std::span<const Rational> unknown_weights,
                          std::span<const Rational> equation_weights);
// Row vector times matrix: sum_k v[k] * A[k][.]
Row row_times(const Row& v, const OpMatrix& a);
bool row_is_zero(const Row& v);
int row_order(const Row& v);

}  // namespace dopalg
