#pragma once

// Compatibility conditions, resolutions, the double-duality test and
// ext-module zero tests.

#include <optional>
#include <string>
#include <vector>

#include "dopalg/groebner.hpp"

namespace dopalg {

// Rows generating every left relation L with L * d = 0. Minimized unless
// minimal is false, in which case the raw Groebner-basis syzygies are returned.
OpMatrix cc(const OpMatrix& d, const Budget& budget = Budget::defaults(), bool minimal = true);

// A generating subset with no member in the module generated by the others.
// Homogeneous input gives a graded-minimal set.
std::vector<Row> minimize(const std::vector<Row>& gens, const ContextPtr& ctx, std::size_t cols,
                          const Budget& budget = Budget::defaults());

struct Resolution {
  std::size_t unknowns = 0;
  std::vector<OpMatrix> steps;  // steps[0] is the input, steps[k+1] = cc(steps[k])
  bool terminated = false;      // last step has zero rows

  std::vector<std::size_t> ranks() const;
  // Orders of the nonzero steps.
  std::vector<int> orders() const;
};

Resolution resolve(const OpMatrix& d, int max_steps, const Budget& budget = Budget::defaults(),
                   bool minimal = true);
// leading_rank - rank_1 + rank_2 - ...; throws NotTerminated on a truncated chain.
long euler_characteristic(const Resolution& r, long leading_rank);

struct TorsionRow {
  Row row;
  std::optional<DiffOp> annihilator;  // lowest-order scalar a with a*row in the module
  int searched_up_to = 0;
};

struct DualityReport {
  OpMatrix d1;        // input
  OpMatrix ad_d1;     // step 2
  OpMatrix ad_d;      // step 3: cc(ad_d1)
  OpMatrix d;         // step 4: ad(ad_d), the candidate parametrization
  OpMatrix d1_prime;  // step 5: cc(d)
  bool parametrizable = false;
  std::vector<TorsionRow> torsion;
};

DualityReport duality_test(const OpMatrix& d1, const Budget& budget = Budget::defaults(), int annihilator_cap = 4);

// Lowest-order a != 0 in D with a*t in the row module of d1, searching orders <= max_order.
std::optional<DiffOp> torsion_annihilator(const Row& t, const OpMatrix& d1, int max_order,
                                          const Budget& budget = Budget::defaults());

// Some B with B * a = identity exists: every unit row lies in the row module.
bool left_invertible(const OpMatrix& a, const Budget& budget = Budget::defaults());

struct ExtReport {
  int index = 0;
  bool is_zero = true;
  std::optional<Row> witness;
  OpMatrix kernel_gens;  // cc(ad(d_{i+1}))
  OpMatrix image_gens;   // ad(d_i)
};

// ext^i of the module presented by d, from the resolution d_1 = d, d_{k+1} = cc(d_k).
ExtReport ext_zero(const OpMatrix& d, int i, const Budget& budget = Budget::defaults(), bool minimal = true);

struct ParametrizationCheck {
  bool composes_to_zero = false;
  bool generates_all_cc = false;
};

ParametrizationCheck verify_parametrization(const OpMatrix& d1, const OpMatrix& d,
                                            const Budget& budget = Budget::defaults());

// Column images of a and b coincide (compared through adjoints).
bool image_equal(const OpMatrix& a, const OpMatrix& b, const Budget& budget = Budget::defaults());

// Multiplies by a common denominator and strips content so the coefficients
// are coprime polynomials with a monic leading one.
DiffOp clear_denominators(const DiffOp& p);

}  // namespace dopalg
