// dopalg: command-line front end for the operator engine.
//
// Exit codes: 0 success, 1 input error, 2 resource budget exceeded.

#include <CLI11.hpp>
#include <algorithm>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "acceptance/acceptance.hpp"
#include "dopalg/catalog.hpp"
#include "dopalg/homology.hpp"
#include "dopalg/report.hpp"
#include "dopalg/spencer.hpp"
#include "dopalg/sysdsl.hpp"

using namespace dopalg;
using nlohmann::json;

namespace {

// Steps of the Groebner engine granted per second of --timeout.
constexpr std::uint64_t kStepsPerSecond = 200000;

struct Args {
  std::string system;
  std::string catalog;
  std::string file;
  std::size_t n = 3;
  bool minkowski = false;
  bool json_out = false;
  int max_steps = 8;
  int degree_cap = 0;
  double timeout = 0;
  std::vector<std::string> params;
  int index = 1;
  int annihilator_cap = 4;
  std::string format = "text";
  std::size_t fuzz_cases = 10000;
};

class InputError : public Error {
 public:
  using Error::Error;
};

Budget make_budget(const Args& a) {
  Budget b = Budget::defaults();
  if (a.degree_cap > 0) b.degree_cap = unsigned(std::min(a.degree_cap, 120));
  if (a.timeout > 0) b.step_cap = std::uint64_t(a.timeout * double(kStepsPerSecond)) + 1;
  return b;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot read " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

Rational parse_rational(const std::string& text) {
  Rational r;
  if (text.empty() || r.set_str(text, 10) != 0) throw InputError("not a rational number: " + text);
  if (r.get_den() == 0) throw InputError("zero denominator in " + text);
  r.canonicalize();
  return r;
}

SystemDef load_system(const Args& a, const Budget& b) {
  std::string cat = !a.catalog.empty() ? a.catalog : a.file.empty() ? a.system : "";
  SystemDef s;
  if (!a.file.empty()) {
    auto all = parse(read_file(a.file));
    if (!a.system.empty()) {
      auto it = std::find_if(all.begin(), all.end(), [&](const SystemDef& x) { return x.name == a.system; });
      if (it == all.end()) throw InputError("no system named '" + a.system + "' in " + a.file);
      s = *it;
    } else {
      if (all.size() != 1) throw InputError(a.file + " defines several systems; pick one with --system");
      s = all.front();
    }
  } else if (!cat.empty()) {
    auto names = catalog_names();
    if (std::find(names.begin(), names.end(), cat) == names.end() && cat != "conformal")
      throw InputError("unknown catalog system: " + cat);
    s = catalog_system(cat, a.n, a.minkowski, b);
  } else {
    throw InputError("give a system with --catalog NAME or --file FILE");
  }
  for (const auto& p : a.params) {
    auto eq = p.find('=');
    if (eq == std::string::npos) throw InputError("--param expects name=value, got " + p);
    std::string name = p.substr(0, eq);
    auto idx = s.ctx->index_of(name);
    if (!idx || s.ctx->is_base(*idx)) throw InputError("'" + name + "' is not a parameter of " + s.name);
    s = specialize(s, name, parse_rational(p.substr(eq + 1)));
  }
  return s;
}

std::string digest_of(const std::string& command, const Args& a, const SystemDef* s) {
  std::ostringstream os;
  os << command << "\n" << a.max_steps << " " << a.index << " " << a.annihilator_cap << "\n";
  if (s) os << print(*s, PrintFormat::dsl);
  return report::fnv1a_hex(os.str());
}

std::string order_text(int o) { return o < 0 ? "-" : std::to_string(o); }

std::string row_text(const Row& r, const VarContext& ctx) {
  std::string out = "(";
  for (std::size_t i = 0; i < r.size(); ++i) out += (i ? ", " : "") + r[i].to_string(ctx);
  return out + ")";
}

std::string header(const SystemDef& s) {
  return s.name + ": " + std::to_string(s.matrix.rows()) + " equations in " + std::to_string(s.matrix.cols()) +
         " unknowns, order " + order_text(s.matrix.order());
}

bool has_weights(const SystemDef& s) {
  for (const auto& w : s.unknown_weights)
    if (w != 1) return true;
  for (const auto& w : s.equation_weights)
    if (w != 1) return true;
  return false;
}

struct Outcome {
  json results;
  std::string text;
  int code = 0;
};

Outcome cmd_adjoint(const SystemDef& s) {
  Outcome o;
  OpMatrix ad = adjoint_matrix(s.matrix);
  o.results = {{"system", s.name}, {"adjoint", report::matrix_json(ad)}};
  o.text = header(s) + "\nadjoint:\n" + ad.to_string();
  if (has_weights(s)) {
    OpMatrix w = weighted_adjoint(s.matrix, s.unknown_weights, s.equation_weights);
    o.results["weighted_adjoint"] = report::matrix_json(w);
    o.results["weighted_self_adjoint"] = w == s.matrix;
    o.text += "weighted adjoint:\n" + w.to_string();
  }
  o.results["self_adjoint"] = ad == s.matrix;
  return o;
}

Outcome cmd_cc(const SystemDef& s, const Budget& b) {
  Outcome o;
  OpMatrix c = cc(s.matrix, b);
  o.results = {{"system", s.name}, {"cc", report::matrix_json(c)}};
  o.text = header(s) + "\ncompatibility conditions: " + std::to_string(c.rows()) + " rows, order " +
           order_text(c.rows() ? c.order() : -1) + "\n" + c.to_string();
  return o;
}

std::string resolution_table(const Resolution& r) {
  std::ostringstream os;
  os << "step  rank  order\n";
  for (std::size_t k = 0; k < r.steps.size(); ++k) {
    char line[64];
    std::snprintf(line, sizeof line, "%4zu  %4zu  %5s\n", k, r.steps[k].rows(),
                  order_text(r.steps[k].rows() ? r.steps[k].order() : -1).c_str());
    os << line;
  }
  os << "terminated: " << (r.terminated ? "yes" : "no") << "\n";
  return os.str();
}

Outcome cmd_resolve(const SystemDef& s, const Args& a, const Budget& b, bool euler) {
  Outcome o;
  Resolution r = resolve(s.matrix, a.max_steps, b);
  o.results = {{"system", s.name}, {"resolution", report::resolution_json(r)}};
  o.text = header(s) + "\n" + resolution_table(r);
  if (euler) {
    if (!r.terminated) throw NotTerminated();
    long chi = euler_characteristic(r, long(s.matrix.cols()));
    o.results["euler_characteristic"] = chi;
    o.text += "euler characteristic: " + std::to_string(chi) + "\n";
  }
  return o;
}

Outcome cmd_param(const SystemDef& s, const Args& a, const Budget& b) {
  Outcome o;
  auto d = duality_test(s.matrix, b, a.annihilator_cap);
  const VarContext& ctx = *s.ctx;
  o.results = {{"system", s.name}, {"duality", report::duality_json(d)}};
  std::ostringstream os;
  os << header(s) << "\n";
  if (d.parametrizable) {
    os << "parametrizable; parametrization with " << d.d.cols() << " potential(s):\n" << d.d.to_string();
  } else {
    os << "not parametrizable; D1' has " << d.d1_prime.rows() << " generators, " << d.torsion.size()
       << " outside the module of D1\n";
    for (const auto& t : d.torsion) {
      os << "  torsion " << row_text(t.row, ctx) << ": ";
      if (t.annihilator) os << "annihilator " << t.annihilator->to_string(ctx) << "\n";
      else os << "annihilator not found up to order " << t.searched_up_to << "\n";
    }
  }
  o.text = os.str();
  return o;
}

Outcome cmd_ext(const SystemDef& s, const Args& a, const Budget& b) {
  Outcome o;
  auto e = ext_zero(s.matrix, a.index, b);
  o.results = {{"system", s.name}, {"ext", report::ext_json(e)}};
  std::string head = "ext^" + std::to_string(a.index);
  o.text = header(s) + "\n" + head + (e.is_zero ? " = 0" : " ≠ 0");
  if (e.witness) o.text += ", witness " + row_text(*e.witness, *s.ctx);
  o.text += "\n";
  return o;
}

json spencer_json(const DeltaComplexReport& r) {
  return {{"n", r.n},          {"q", r.q},
          {"dims", r.dims},    {"rank_out", r.rank_out},
          {"rank_in", r.rank_in}, {"cohomology", r.cohomology},
          {"delta_squared_zero", r.delta_squared_zero}};
}

Outcome cmd_spencer(const Args& a, const Budget& b) {
  Outcome o;
  std::ostringstream os;
  std::string cat = !a.catalog.empty() ? a.catalog : a.system;
  if (a.file.empty() && cat == "lanczos") {
    auto lc = lanczos_check(b);
    o.results = {{"bianchi_rows", lc.bianchi_rows},   {"bianchi_order", lc.bianchi_order},
                 {"lanczos_dim", lc.lanczos_dim},     {"h3", lc.h3_dim},
                 {"sequence", lc.sequence},           {"sequence_exact", lc.sequence_exact},
                 {"bianchi_composes", lc.bianchi_composes}, {"adjoint_composes", lc.adjoint_composes}};
    os << "bianchi: " << lc.bianchi_rows << " rows of order " << lc.bianchi_order << "\n"
       << "0 -> " << lc.sequence[0] << " -> " << lc.sequence[1] << " -> " << lc.sequence[2] << " -> 0 "
       << (lc.sequence_exact ? "exact" : "not exact") << "\nlanczos space dimension " << lc.lanczos_dim << "\n";
    o.text = os.str();
    return o;
  }
  SystemDef s = load_system(a, b);
  SymbolSpace g = symbol_of(s.matrix);
  auto rep = delta_complex(g, g.n());
  SymbolSpace g1 = prolong(g), g2 = prolong(g1);
  o.results = {{"system", s.name},
               {"delta_complex", spencer_json(rep)},
               {"prolongations", {g.dim(), g1.dim(), g2.dim()}}};
  os << header(s) << "\nsymbol dimension " << g.dim() << ", prolongations " << g1.dim() << ", " << g2.dim() << "\n";
  os << "s  dim  rank_in  rank_out  H^s\n";
  for (std::size_t k = 0; k < rep.dims.size(); ++k)
    os << k << "  " << rep.dims[k] << "  " << rep.rank_in[k] << "  " << rep.rank_out[k] << "  " << rep.cohomology[k]
       << "\n";
  os << "delta^2 = 0: " << (rep.delta_squared_zero ? "yes" : "no") << "\n";
  o.text = os.str();
  return o;
}

Outcome cmd_catalog(const Args& a, const Budget& b) {
  Outcome o;
  if (a.catalog.empty() && a.system.empty() && a.file.empty()) {
    o.results = {{"systems", catalog_names()}};
    for (const auto& n : catalog_names()) o.text += n + "\n";
    return o;
  }
  SystemDef s = load_system(a, b);
  o.results = {{"system", report::system_json(s)}};
  PrintFormat f = a.format == "dsl" ? PrintFormat::dsl : a.format == "json" ? PrintFormat::json : PrintFormat::text;
  o.text = print(s, f);
  return o;
}

Outcome cmd_check_all(const Args& a) {
  Outcome o;
  acceptance::Options opt;
  opt.budget = make_budget(a);
  opt.fuzz_cases = a.fuzz_cases;
  bool stream = !a.json_out;
  auto results = acceptance::run_all(opt, [&](const acceptance::CriterionResult& r) {
    if (stream) std::cout << acceptance::format_line(r) << std::endl;
  });
  json list = json::array();
  bool all = true, budget = false;
  for (const auto& r : results) {
    all &= r.pass;
    budget |= r.budget_exceeded;
    list.push_back({{"id", r.id}, {"name", r.name}, {"pass", r.pass}, {"budget_exceeded", r.budget_exceeded},
                    {"detail", r.detail}, {"seconds", r.seconds}, {"limit_seconds", r.limit_seconds}});
  }
  o.results = {{"criteria", list}, {"all_pass", all}};
  o.code = all ? 0 : budget ? 2 : 1;
  return o;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Linear differential operator analysis: adjoints, compatibility conditions, resolutions, "
               "parametrizations and symbol cohomology."};
  app.require_subcommand(1);
  Args a;
  auto add_common = [&](CLI::App* c) {
    c->add_option("--catalog", a.catalog, "Catalog system name");
    c->add_option("--system", a.system, "System name (catalog, or a system inside --file)");
    c->add_option("--file", a.file, "A .dop source file");
    c->add_option("--n", a.n, "Dimension for catalog families")->check(CLI::Range(1, 8));
    c->add_flag("--minkowski", a.minkowski, "Use the Minkowski signature (-1, +1, ...)");
    c->add_flag("--json", a.json_out, "Print a JSON report");
    c->add_option("--max-steps", a.max_steps, "Resolution length limit")->check(CLI::Range(1, 64));
    c->add_option("--degree-cap", a.degree_cap, "Maximum derivative order during eliminations")->check(CLI::Range(1, 120));
    c->add_option("--timeout", a.timeout, "Work budget in seconds (converted to engine steps)")->check(CLI::NonNegativeNumber);
    c->add_option("--param", a.params, "Specialize a parameter: name=value")->allow_extra_args(false);
  };
  std::vector<std::pair<std::string, std::string>> cmds = {
      {"adjoint", "Formal adjoint of the system"},
      {"cc", "Compatibility conditions"},
      {"resolve", "Chain of compatibility conditions"},
      {"param-test", "Double-duality parametrization test"},
      {"ext", "Vanishing test for ext^i of the module"},
      {"spencer", "Spencer delta cohomology of the symbol (catalog 'lanczos' for the Lanczos check)"},
      {"euler", "Euler characteristic of the resolution"},
      {"catalog", "List catalog systems or print one"},
      {"check-all", "Run the acceptance suite"},
  };
  std::map<std::string, CLI::App*> sub;
  for (const auto& [name, help] : cmds) {
    CLI::App* c = app.add_subcommand(name, help);
    add_common(c);
    sub[name] = c;
  }
  sub["ext"]->add_option("--i", a.index, "ext index")->check(CLI::Range(1, 16));
  sub["param-test"]->add_option("--annihilator-cap", a.annihilator_cap, "Order limit of the torsion annihilator search")
      ->check(CLI::Range(0, 12));
  sub["catalog"]->add_option("--format", a.format, "text, dsl or json")->check(CLI::IsMember({"text", "dsl", "json"}));
  sub["check-all"]->add_option("--fuzz-cases", a.fuzz_cases, "Number of mutated DSL inputs");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 1;
  }

  std::string command;
  for (const auto& [name, c] : sub)
    if (c->parsed()) command = name;

  if (!a.catalog.empty() && a.catalog != "conformal" && !(command == "spencer" && a.catalog == "lanczos")) {
    auto names = catalog_names();
    if (std::find(names.begin(), names.end(), a.catalog) == names.end()) {
      std::cerr << "error: unknown catalog system: " << a.catalog << "\n";
      return 1;
    }
  }

  auto start = std::chrono::steady_clock::now();
  Budget budget = make_budget(a);
  try {
    Outcome o;
    std::unique_ptr<SystemDef> input;
    if (command == "check-all") {
      o = cmd_check_all(a);
    } else if (command == "spencer") {
      o = cmd_spencer(a, budget);
    } else if (command == "catalog") {
      o = cmd_catalog(a, budget);
    } else {
      input = std::make_unique<SystemDef>(load_system(a, budget));
      if (command == "adjoint") o = cmd_adjoint(*input);
      else if (command == "cc") o = cmd_cc(*input, budget);
      else if (command == "resolve") o = cmd_resolve(*input, a, budget, false);
      else if (command == "euler") o = cmd_resolve(*input, a, budget, true);
      else if (command == "param-test") o = cmd_param(*input, a, budget);
      else if (command == "ext") o = cmd_ext(*input, a, budget);
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (a.json_out) {
      std::cout << report::make(command, digest_of(command, a, input.get()), o.results, budget, secs).dump(2) << "\n";
    } else {
      std::cout << o.text;
      if (!o.text.empty() && o.text.back() != '\n') std::cout << "\n";
    }
    return o.code;
  } catch (const ParseError& e) {
    std::cerr << (a.file.empty() ? "input" : a.file) << ":" << e.span().line << ":" << e.span().column
              << ": error: " << e.detail() << "\n";
    return 1;
  } catch (const ResourceBudgetExceeded& e) {
    std::cerr << "budget exceeded: " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
