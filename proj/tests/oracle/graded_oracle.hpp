#pragma once

// Brute-force check of compatibility conditions for constant-coefficient
// systems. Operators are read as commutative polynomials in the symbols of
// the derivatives; everything else is plain linear algebra over Q, without
// any Groebner machinery.

#include <optional>
#include <string>
#include <vector>

#include "dopalg/ops.hpp"

namespace oracle {

struct DegreeCount {
  int degree = 0;
  std::size_t relations = 0;  // dim {L homogeneous of this degree : L D = 0}
  std::size_t generated = 0;  // dim span {d^alpha C_k} in this degree
};

struct OracleResult {
  bool applicable = false;  // constant rational coefficients and a consistent grading
  std::string reason;       // why not applicable
  bool annihilates = false; // C D = 0 as polynomial matrices
  std::vector<DegreeCount> degrees;
  bool agrees() const;
};

// Compares the relations of d with the module generated by the rows of c, in
// every degree up to (max degree of the rows of c) + extra.
OracleResult compare_cc(const dopalg::OpMatrix& d, const dopalg::OpMatrix& c, int extra = 2);

}  // namespace oracle
