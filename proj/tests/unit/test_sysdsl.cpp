#include <doctest.h>

#include <nlohmann/json.hpp>

#include "dopalg/catalog.hpp"
#include "dopalg/sysdsl.hpp"

using namespace dopalg;

namespace {

ParseError parse_error(const std::string& text) {
  try {
    parse(text);
  } catch (const ParseError& e) {
    return e;
  }
  FAIL("expected a parse error for: " << text);
  return ParseError(ParseError::Kind::syntax, {}, "");
}

}  // namespace

TEST_SUITE("sysdsl") {
  TEST_CASE("pendulum source gives the catalog matrix") {
    auto s = parse_single(
        "vars t; params g l1 l2; unknowns x th1 th2; system p { eq: d[t,t]x + l1*d[t,t]th1 + g*th1; "
        "eq: d[t,t]x + l2*d[t,t]th2 + g*th2; }");
    SystemDef ref = double_pendulum(false);
    CHECK(*s.ctx == *ref.ctx);
    CHECK(s.matrix == ref.matrix);
    CHECK(s.equations == std::vector<std::string>{"e1", "e2"});
  }

  TEST_CASE("single derivative") {
    auto s = parse_single("vars x1 x2; unknowns u; system z { eq: d[x1]u; }");
    CHECK(s.matrix.rows() == 1);
    CHECK(s.matrix.at(0, 0) == DiffOp::d(0));
  }

  TEST_CASE("empty body is the zero-row operator") {
    auto s = parse_single("vars x1 x2; unknowns u; system z { }");
    CHECK(s.matrix.rows() == 0);
    CHECK(s.matrix.cols() == 1);
    auto again = parse_single(print(s, PrintFormat::dsl));
    CHECK(again.matrix == s.matrix);
  }

  TEST_CASE("variable coefficients and operator algebra") {
    auto s = parse_single("vars x1 x2; unknowns xi1 xi2; system m { eq: x1^2*d[x1]xi1 + xi2; eq: d[x1](x1*xi1); }");
    RationalFunction x1 = RationalFunction::variable(0);
    CHECK(s.matrix.at(0, 0) == DiffOp::d(0).scaled_left(x1 * x1));
    CHECK(s.matrix.at(0, 1) == DiffOp(1));
    // d[x1] applied to x1*xi1 is x1*d[x1]xi1 + xi1.
    CHECK(s.matrix.at(1, 0) == DiffOp::d(0).scaled_left(x1) + DiffOp(1));
    auto r = parse_single("vars x; params a; unknowns u; system q { eq lbl: (1 - a*x)/(2*a)*d[x,x]u - 3/4*u; }");
    CHECK(r.equations[0] == "lbl");
    CHECK(parse_single(print(r, PrintFormat::dsl)).matrix == r.matrix);
  }

  TEST_CASE("comments above a system become its note") {
    auto all = parse("# file header\n\nvars x; unknowns u;\n# first line\n# second line\nsystem a { eq: u; }\n"
                     "# detached\n\nsystem b { eq: d[x]u; }");
    CHECK(all[0].note == "first line\nsecond line");
    CHECK(all[1].note.empty());
  }

  TEST_CASE("several systems share declarations") {
    auto all = parse("vars x; unknowns u v; system a { eq: d[x]u; } system b { eq: u - v; eq: d[x]v; }");
    REQUIRE(all.size() == 2);
    CHECK(all[1].matrix.rows() == 2);
    CHECK(all[0].ctx == all[1].ctx);
    CHECK_THROWS_AS(parse_single("vars x; unknowns u; system a { eq: u; } system b { eq: u; }"), Error);
  }

  TEST_CASE("errors carry locations") {
    auto e = parse_error("vars x;\nunknowns u;\nsystem s {\n  eq: d[x]w;\n}");
    CHECK(e.kind() == ParseError::Kind::semantic);
    CHECK(e.span().line == 4);
    CHECK(e.span().column == 11);

    e = parse_error("vars x; unknowns u; system s { eq: x^2 + 1; }");
    CHECK(e.kind() == ParseError::Kind::semantic);
    CHECK(e.span().offset == 35);
    CHECK(e.span().length == 7);

    e = parse_error("vars x; unknowns u; system s { eq: 1.5*u; }");
    CHECK(e.kind() == ParseError::Kind::lexical);

    e = parse_error("vars x; unknowns u; system s { eq: d[x]u }");
    CHECK(e.kind() == ParseError::Kind::syntax);
    CHECK(std::string(e.what()).find("line 1") != std::string::npos);

    CHECK(parse_error("vars x; unknowns u; system s { eq: u/(x-x); }").kind() == ParseError::Kind::semantic);
    CHECK(parse_error("vars x; unknowns u; system s { eq: u*x; }").kind() == ParseError::Kind::semantic);
    CHECK(parse_error("vars x; unknowns u; system s { eq: d[u]u; }").kind() == ParseError::Kind::semantic);
    CHECK(parse_error("vars x x; unknowns u; system s { eq: u; }").kind() == ParseError::Kind::semantic);
    CHECK(parse_error("vars x; unknowns u; system s { eq: (x+1)^300*u; }").kind() == ParseError::Kind::semantic);
    CHECK(parse_error("vars x; unknowns u;").kind() == ParseError::Kind::syntax);
    CHECK(parse_error("unknowns u; system s { eq: u; }").kind() == ParseError::Kind::semantic);
    CHECK(parse_error(std::string(5000, '(')).kind() == ParseError::Kind::syntax);
  }

  TEST_CASE("round trip over the catalog") {
    for (const auto& name : catalog_names())
      for (bool mk : {false, true}) {
        std::size_t n = name == "einstein" || name == "bianchi" ? 4 : 3;
        SystemDef s = catalog_system(name, n, mk);
        std::string text = print(s, PrintFormat::dsl);
        SystemDef back = parse_single(text);
        CHECK_MESSAGE(back.matrix == s.matrix, name);
        CHECK(back.unknowns == s.unknowns);
        CHECK(back.equations == s.equations);
        CHECK(back.note == s.note);
        CHECK(print(back, PrintFormat::dsl) == text);
      }
  }

  TEST_CASE("text and json renderings") {
    std::string t = print(airy(), PrintFormat::text);
    CHECK(t.find("s11 = d[x2,x2]lam") != std::string::npos);
    CHECK(t.find("s12 = -d[x1,x2]lam") != std::string::npos);
    CHECK(t.find("s22 = d[x1,x1]lam") != std::string::npos);
    auto j = nlohmann::json::parse(print(airy(), PrintFormat::json));
    CHECK(j["matrix"]["rows"] == 3);
    CHECK(j["unknowns"][0] == "lam");
    auto zero = parse_single("vars x; unknowns u; system z { eq: 0*u; }");
    auto jz = nlohmann::json::parse(print(zero, PrintFormat::json));
    CHECK(jz["matrix"]["order"] == "-");
    CHECK(jz["matrix"]["entries"][0][0] == "0");
  }
}
