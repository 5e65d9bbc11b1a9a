#pragma once

// Symbols g_q in S_q T* (x) T, their prolongations and the Spencer delta complex.
//
// Coordinates are v^k_mu with mu a multi-index of order q (no multiplicity
// weights), stored at index monomial_index(mu) * n + k.

#include <cstddef>
#include <map>
#include <vector>

#include "dopalg/linalg.hpp"
#include "dopalg/ops.hpp"

namespace dopalg {

struct MetricSpec;

class SymbolSpace {
 public:
  SymbolSpace(std::size_t n, std::size_t q, DenseMatrix<Rational> constraints);

  std::size_t n() const { return n_; }
  std::size_t q() const { return q_; }
  const std::vector<Deriv>& monomials() const { return monomials_; }
  std::size_t monomial_index(const Deriv& mu) const;
  std::size_t coords() const { return monomials_.size() * n_; }
  std::size_t coord(const Deriv& mu, std::size_t k) const { return monomial_index(mu) * n_ + k; }
  const DenseMatrix<Rational>& constraints() const { return constraints_; }
  std::size_t dim() const { return basis_.size(); }
  const std::vector<std::vector<Rational>>& basis() const { return basis_; }

 private:
  std::size_t n_, q_;
  std::vector<Deriv> monomials_;
  std::map<std::uint64_t, std::size_t> index_;
  DenseMatrix<Rational> constraints_;  // reduced, nonzero rows only
  std::vector<std::vector<Rational>> basis_;
};

// All multi-indices of order q in n variables, in a fixed order.
std::vector<Deriv> multi_indices(std::size_t n, std::size_t q);

SymbolSpace full_symbol(std::size_t n, std::size_t q);
SymbolSpace killing_symbol(const MetricSpec& m);
SymbolSpace conformal_symbol(const MetricSpec& m);
SymbolSpace prolong(const SymbolSpace& g);
// Symbol of an equal-order system: every nonzero row must have the same
// order q, with rational constant coefficients in its order-q part. Columns
// are the unknowns, so the unknown count must equal the number of variables.
SymbolSpace symbol_of(const OpMatrix& d);

struct DeltaComplexReport {
  std::size_t n = 0;
  std::size_t q = 0;
  std::vector<std::size_t> dims;      // dim(Lambda^s T* (x) g_q), s = 0..s_max
  std::vector<std::size_t> rank_out;  // delta: Lambda^s (x) g_q -> Lambda^{s+1} (x) S_{q-1} (x) T
  std::vector<std::size_t> rank_in;   // delta: Lambda^{s-1} (x) g_{q+1} -> Lambda^s (x) g_q
  std::vector<std::size_t> cohomology;
  bool delta_squared_zero = false;
};

DeltaComplexReport delta_complex(const SymbolSpace& g, std::size_t s_max);

struct LanczosSpace {
  std::size_t ambient = 0;  // dim Lambda^2 T* (x) T*
  std::size_t rank = 0;     // independent cyclic constraints
  std::size_t dim = 0;
  DenseMatrix<Rational> constraints;
};

LanczosSpace lanczos_space(std::size_t n = 4);

std::size_t binomial(std::size_t n, std::size_t k);

}  // namespace dopalg
