#pragma once

// Dense exact Gaussian elimination over a field (Rational or RationalFunction).

#include <cstddef>
#include <utility>
#include <vector>

#include "dopalg/scalars.hpp"

namespace dopalg {

template <class F>
struct DenseMatrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<F> a;

  DenseMatrix() = default;
  DenseMatrix(std::size_t r, std::size_t c) : rows(r), cols(c), a(r * c) {}
  F& operator()(std::size_t i, std::size_t j) { return a[i * cols + j]; }
  const F& operator()(std::size_t i, std::size_t j) const { return a[i * cols + j]; }
};

namespace detail {
inline bool field_zero(const Rational& x) { return sgn(x) == 0; }
inline bool field_zero(const RationalFunction& x) { return x.is_zero(); }
}  // namespace detail

// Reduced row echelon form in place; returns the pivot columns.
template <class F>
std::vector<std::size_t> rref(DenseMatrix<F>& m) {
  std::vector<std::size_t> pivots;
  std::size_t r = 0;
  for (std::size_t c = 0; c < m.cols && r < m.rows; ++c) {
    std::size_t p = r;
    while (p < m.rows && detail::field_zero(m(p, c))) ++p;
    if (p == m.rows) continue;
    if (p != r)
      for (std::size_t j = 0; j < m.cols; ++j) std::swap(m(p, j), m(r, j));
    F inv = F(1) / m(r, c);
    for (std::size_t j = c; j < m.cols; ++j)
      if (!detail::field_zero(m(r, j))) m(r, j) *= inv;
    for (std::size_t i = 0; i < m.rows; ++i) {
      if (i == r || detail::field_zero(m(i, c))) continue;
      F f = m(i, c);
      for (std::size_t j = c; j < m.cols; ++j)
        if (!detail::field_zero(m(r, j))) m(i, j) -= f * m(r, j);
    }
    pivots.push_back(c);
    ++r;
  }
  return pivots;
}

template <class F>
std::size_t rank(DenseMatrix<F> m) {
  return rref(m).size();
}

// Basis of {x : m x = 0}.
template <class F>
std::vector<std::vector<F>> kernel(DenseMatrix<F> m) {
  auto piv = rref(m);
  std::vector<bool> is_piv(m.cols, false);
  for (auto c : piv) is_piv[c] = true;
  std::vector<std::vector<F>> out;
  for (std::size_t f = 0; f < m.cols; ++f) {
    if (is_piv[f]) continue;
    std::vector<F> x(m.cols, F(0));
    x[f] = F(1);
    for (std::size_t r = 0; r < piv.size(); ++r) x[piv[r]] = -m(r, f);
    out.push_back(std::move(x));
  }
  return out;
}

}  // namespace dopalg
