#include "dopalg/report.hpp"

#include <cmath>
#include <cstdint>
#include <cstdio>

#include "dopalg/sysdsl.hpp"

namespace dopalg::report {

using nlohmann::json;

std::string fnv1a_hex(std::string_view data) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : data) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

json order_json(int order) { return order < 0 ? json("-") : json(order); }

json row_json(const Row& r, const VarContext& ctx) {
  json out = json::array();
  for (const auto& e : r) out.push_back(e.to_string(ctx));
  return out;
}

json matrix_json(const OpMatrix& m) {
  json rows = json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) rows.push_back(row_json(m.row(i), m.ctx()));
  return {{"rows", m.rows()}, {"cols", m.cols()}, {"order", order_json(m.order())}, {"entries", rows}};
}

json system_json(const SystemDef& s) {
  const VarContext& ctx = s.matrix.ctx();
  json weights_u = json::array(), weights_e = json::array();
  for (const auto& w : s.unknown_weights) weights_u.push_back(w.get_str());
  for (const auto& w : s.equation_weights) weights_e.push_back(w.get_str());
  json eqs = json::array();
  for (std::size_t i = 0; i < s.matrix.rows(); ++i) eqs.push_back({{"label", s.equations[i]}, {"expr", equation_string(s, i)}});
  return {{"name", s.name},
          {"vars", ctx.base_vars()},
          {"params", ctx.params()},
          {"unknowns", s.unknowns},
          {"equations", eqs},
          {"matrix", matrix_json(s.matrix)},
          {"unknown_weights", weights_u},
          {"equation_weights", weights_e},
          {"note", s.note}};
}

json resolution_json(const Resolution& r) {
  json steps = json::array();
  for (const auto& s : r.steps) steps.push_back({{"rank", s.rows()}, {"order", order_json(s.rows() ? s.order() : -1)}});
  return {{"unknowns", r.unknowns}, {"terminated", r.terminated}, {"ranks", r.ranks()}, {"orders", r.orders()},
          {"steps", steps}};
}

json duality_json(const DualityReport& d) {
  const VarContext& ctx = d.d1.ctx();
  json torsion = json::array();
  for (const auto& t : d.torsion) {
    json ann = t.annihilator ? json(t.annihilator->to_string(ctx)) : json(nullptr);
    torsion.push_back({{"row", row_json(t.row, ctx)}, {"annihilator", ann}, {"searched_up_to", t.searched_up_to}});
  }
  return {{"parametrizable", d.parametrizable},
          {"adjoint_cc", matrix_json(d.ad_d)},
          {"parametrization", matrix_json(d.d)},
          {"d1_prime", matrix_json(d.d1_prime)},
          {"d1_prime_generators", d.d1_prime.rows()},
          {"torsion", torsion}};
}

json ext_json(const ExtReport& e) {
  const VarContext& ctx = e.image_gens.ctx();
  return {{"index", e.index},
          {"is_zero", e.is_zero},
          {"witness", e.witness ? row_json(*e.witness, ctx) : json(nullptr)},
          {"kernel_generators", e.kernel_gens.rows()},
          {"image_generators", e.image_gens.rows()}};
}

json budget_json(const Budget& b) {
  return {{"degree_cap", b.degree_cap},
          {"basis_cap", b.basis_cap},
          {"step_cap", b.step_cap},
          {"used",
           {{"steps", b.usage->steps}, {"max_degree", b.usage->max_degree}, {"max_basis", b.usage->max_basis}}}};
}

json make(const std::string& command, const std::string& input_digest, json results, const Budget& budget,
          double seconds) {
  return {{"schema_version", kSchemaVersion},
          {"engine_version", kEngineVersion},
          {"command", command},
          {"input_digest", "fnv1a64:" + input_digest},
          {"results", std::move(results)},
          {"budget", budget_json(budget)},
          {"timings", {{"seconds", std::round(seconds * 1e3) / 1e3}}}};
}

}  // namespace dopalg::report
