#pragma once

// Left Groebner bases of submodules of the free module D^(1 x m).
//
// Module monomials are e_pos * d^mu. Terms are ordered by a packed 128-bit key
// (block, shifted degree, degrevlex of mu, position) so that comparisons and
// left multiplication by d^alpha are integer operations.

#include <cstdint>
#include <memory>
#include <optional>
#include <set>
#include <vector>

#include "dopalg/ops.hpp"

namespace dopalg {

enum class OrderKind { TOP, POT };

struct ModTermOrder {
  OrderKind kind = OrderKind::TOP;
  // Per-position degree shift; empty means all zero.
  std::vector<int> shift;
  // Per-position block index; lower block = larger terms. Empty means one block.
  std::vector<std::uint8_t> block;

  int shift_of(std::size_t pos) const { return pos < shift.size() ? shift[pos] : 0; }
  std::uint8_t block_of(std::size_t pos) const { return pos < block.size() ? block[pos] : 0; }
};

struct BudgetUsage {
  std::uint64_t steps = 0;
  unsigned max_degree = 0;
  std::size_t max_basis = 0;
};

struct Budget {
  unsigned degree_cap = 12;
  std::size_t basis_cap = 10000;
  std::uint64_t step_cap = 0;  // 0: unlimited
  std::shared_ptr<BudgetUsage> usage = std::make_shared<BudgetUsage>();

  // Defaults, with DOPALG_DEGREE_CAP applied when set.
  static Budget defaults();
};

using Key = unsigned __int128;

struct ModTerm {
  Key key;
  Deriv mu;
  std::uint32_t pos;
  RationalFunction coef;
};

// Sorted by strictly decreasing key; no zero coefficients.
using ModVec = std::vector<ModTerm>;

class GroebnerBasis {
 public:
  GroebnerBasis(ContextPtr ctx, std::size_t rank, ModTermOrder order = {}, Budget budget = Budget::defaults());

  std::size_t rank() const { return rank_; }
  const ContextPtr& context() const { return ctx_; }
  const ModTermOrder& order() const { return order_; }
  const Budget& budget() const { return budget_; }

  // Queues a generator; it enters the basis when complete() reaches its degree.
  void add(const Row& v);
  void add(ModVec v);
  // Runs Buchberger's algorithm. With a bound, only pairs and generators of
  // sugar <= bound are processed (exact for homogeneous input).
  void complete(std::optional<int> up_to_sugar = std::nullopt);
  bool is_complete() const { return queue_.empty(); }
  // Replaces the basis by the reduced Groebner basis. Requires completion.
  void interreduce();

  Row reduce(const Row& v) const;
  ModVec reduce(ModVec v, bool full = true) const;
  bool member(const Row& v) const;

  // Active basis elements (the reduced basis after interreduce()).
  std::vector<ModVec> basis() const;
  std::vector<Row> rows() const;

  ModVec to_vec(const Row& r) const;
  Row to_row(const ModVec& v) const;
  Key key_of(std::uint32_t pos, const Deriv& mu) const;
  int wdeg(const ModTerm& t) const { return int(t.mu.order()) + order_.shift_of(t.pos); }

  // c * d^alpha * g, sorted.
  ModVec mul_left(const Deriv& alpha, const RationalFunction& c, const ModVec& g) const;

  // Re-checks that every S-vector of the active basis reduces to zero.
  bool verify() const;

 private:
  struct Elem {
    ModVec v;
    bool constant = true;
    bool active = true;
    int sugar = 0;
  };
  struct Pending {
    int sugar;
    Key lcm_key;
    int i;  // -1 for a queued generator
    int j;
    bool operator<(const Pending& o) const {
      if (sugar != o.sugar) return sugar < o.sugar;
      if (lcm_key != o.lcm_key) return lcm_key < o.lcm_key;
      if (i != o.i) return i < o.i;
      return j < o.j;
    }
  };

  const ModTerm& lead(int i) const { return elems_[std::size_t(i)].v.front(); }
  int find_reducer(const ModTerm& t) const;
  ModVec spoly(int i, int j) const;
  void insert(ModVec h, int sugar);
  void tick() const;
  void check_degree(unsigned d) const;
  ModVec sub_scaled(const ModVec& v, std::size_t from, const ModVec& w) const;
  void make_monic(ModVec& v) const;

  ContextPtr ctx_;
  std::size_t rank_;
  ModTermOrder order_;
  Budget budget_;
  std::vector<Elem> elems_;
  std::vector<std::vector<int>> by_pos_;  // active element indices per position
  std::set<Pending> queue_;
  std::vector<ModVec> generators_;
  std::vector<int> generator_sugar_;
};

GroebnerBasis buchberger(const OpMatrix& gens, ModTermOrder order = {}, Budget budget = Budget::defaults());
Row reduce(const Row& v, const GroebnerBasis& g);

struct MemberResult {
  bool is_member = false;
  Row normal_form;                 // set when not a member
  std::vector<DiffOp> cofactors;  // v = sum cofactors[i] * gens.row(i) when a member
};

// Membership with cofactors over the original generators.
class CofactorBasis {
 public:
  CofactorBasis(const OpMatrix& gens, Budget budget = Budget::defaults());
  MemberResult member(const Row& v) const;

 private:
  OpMatrix gens_;
  std::size_t m_;
  GroebnerBasis gb_;
};

MemberResult member(const Row& v, const OpMatrix& gens, Budget budget = Budget::defaults());
// Every row of b lies in the row module of a.
bool module_contains(const OpMatrix& a, const OpMatrix& b, Budget budget = Budget::defaults());
bool module_equal(const OpMatrix& a, const OpMatrix& b, Budget budget = Budget::defaults());

// Integer grading making the matrix homogeneous: each nonzero entry (i, j) is
// homogeneous of order row_degree[i] - col_shift[j] with x-free coefficients.
struct Grading {
  std::vector<int> col_shift;
  std::vector<int> row_degree;
};
std::optional<Grading> detect_grading(const OpMatrix& a);

// Generators of all left syzygies of the rows (not minimized), as rows of
// length a.rows(). Graded input yields homogeneous syzygies.
std::vector<Row> syzygies(const OpMatrix& a, Budget budget = Budget::defaults());

// Scales a row so that its leading term under the default order has coefficient 1.
Row normalize_row(const Row& r, const ContextPtr& ctx);

}  // namespace dopalg
