#pragma once

// Machine-readable reports. Everything under "results" is a pure function of
// the input and the budget; wall-clock timings live in a separate field.

#include <nlohmann/json.hpp>
#include <string>
#include <string_view>

#include "dopalg/catalog.hpp"
#include "dopalg/homology.hpp"

namespace dopalg::report {

inline constexpr int kSchemaVersion = 1;
inline constexpr const char* kEngineVersion = "0.1.0";

// 64-bit FNV-1a, as 16 lowercase hex digits.
std::string fnv1a_hex(std::string_view data);

// Orders of zero operators print as "-".
nlohmann::json order_json(int order);
nlohmann::json row_json(const Row& r, const VarContext& ctx);
nlohmann::json matrix_json(const OpMatrix& m);
nlohmann::json system_json(const SystemDef& s);
nlohmann::json resolution_json(const Resolution& r);
nlohmann::json duality_json(const DualityReport& d);
nlohmann::json ext_json(const ExtReport& e);
nlohmann::json budget_json(const Budget& b);

nlohmann::json make(const std::string& command, const std::string& input_digest, nlohmann::json results,
                    const Budget& budget, double seconds);

}  // namespace dopalg::report
