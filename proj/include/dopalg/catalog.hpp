#pragma once

// Concrete operator families in explicit coordinates. Metrics are flat and
// constant: omega = diag(signature).

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "dopalg/groebner.hpp"

namespace dopalg {

struct MetricSpec {
  std::size_t n = 0;
  std::vector<int> signature;

  static MetricSpec euclidean(std::size_t n);
  // signature (-1, +1, ..., +1)
  static MetricSpec minkowski(std::size_t n);
  void validate() const;
};

struct SystemDef {
  std::string name;
  ContextPtr ctx;
  std::vector<std::string> unknowns;
  std::vector<std::string> equations;  // one label per row
  OpMatrix matrix;
  std::string note;
  // Pairing weights on the unknown and equation sides (all 1 unless the
  // components are those of a symmetric tensor).
  std::vector<Rational> unknown_weights;
  std::vector<Rational> equation_weights;

  void validate() const;
};

// Index pairs (i, j), i <= j, in the canonical order used for symmetric tensors.
std::vector<std::pair<std::size_t, std::size_t>> sym_pairs(std::size_t n);
// 1 on diagonal components, 2 off the diagonal.
std::vector<Rational> sym_weights(std::size_t n);
std::size_t sym_index(std::size_t n, std::size_t i, std::size_t j);
// sym_weights times s_i s_j: the pairing of two covariant symmetric tensors.
std::vector<Rational> metric_weights(const MetricSpec& m);

SystemDef killing(const MetricSpec& m);
SystemDef conformal_killing(const MetricSpec& m);
SystemDef riemann(const MetricSpec& m, const Budget& budget = Budget::defaults());
SystemDef bianchi(const MetricSpec& m, const Budget& budget = Budget::defaults());
SystemDef ricci(const MetricSpec& m);
SystemDef einstein(const MetricSpec& m);
SystemDef trace_flip(const MetricSpec& m);
SystemDef divergence(const MetricSpec& m);
SystemDef cauchy(const MetricSpec& m);
SystemDef airy();
SystemDef beltrami(bool weighted);
// Medolaghi system for alpha = (1 - c x2) dx1, beta = dx1 ^ dx2, so that
// d(alpha) = c beta. No value means c is a symbolic parameter.
SystemDef vessiot(std::optional<Rational> c);
SystemDef vessiot_cc(std::optional<Rational> c);
SystemDef double_pendulum(bool equal);
// The 4th-order column parametrizing the generic double pendulum.
OpMatrix pendulum_parametrization(const SystemDef& pendulum);

// Operator X with einstein = X o trace_flip (n = 4, where trace_flip is an involution).
OpMatrix wave_operator(const MetricSpec& m);

struct LanczosCheck {
  std::size_t bianchi_rows = 0;
  int bianchi_order = 0;
  std::size_t lanczos_dim = 0;
  std::size_t h3_dim = 0;
  std::vector<std::size_t> sequence;  // 0 -> a -> b -> c -> 0
  bool sequence_exact = false;
  bool bianchi_composes = false;      // bianchi o riemann = 0
  bool adjoint_composes = false;      // ad(riemann) o ad(bianchi) = 0
};
LanczosCheck lanczos_check(const Budget& budget = Budget::defaults());

// Catalog lookup for the command line; throws Error on unknown names.
SystemDef catalog_system(const std::string& name, std::size_t n, bool minkowski,
                         const Budget& budget = Budget::defaults());
std::vector<std::string> catalog_names();

// Returns a copy with parameter `name` replaced by `value`; the parameter is
// dropped from the context.
SystemDef specialize(const SystemDef& s, const std::string& name, const Rational& value);
// Same with a value in the field of s (which must not involve `name`).
SystemDef specialize(const SystemDef& s, const std::string& name, const RationalFunction& value);
SystemDef rename_parameter(const SystemDef& s, const std::string& from, const std::string& to);

}  // namespace dopalg
