#include <doctest.h>

#include "dopalg/errors.hpp"
#include "gen.hpp"

using namespace dopalg;

TEST_SUITE("scalars") {
  TEST_CASE("gcd of polynomials") {
    Poly x = Poly::variable(0), y = Poly::variable(1), one(Rational(1));
    Poly a = (x + one) * (x - one) * y, b = (x + one) * (x + one);
    CHECK(gcd(a, b) == x + one);
    CHECK(gcd(Poly(), Poly()).is_zero());
    CHECK(gcd(a, Poly()) == a.monic());
    Poly c = (x * y + one) * (x - y);
    CHECK(gcd(c * (x + y), c * (y - one)) == c.monic());
  }

  TEST_CASE("rational functions are kept reduced") {
    Poly x = Poly::variable(0), one(Rational(1));
    RationalFunction f(x * x - one, x - one);
    CHECK(f == RationalFunction(x + one));
    CHECK(f.denominator() == one);
    RationalFunction g(Poly(Rational(2)), x.scaled(Rational(4)));
    CHECK(g.denominator() == x);
    CHECK(g.numerator() == Poly(Rational(1, 2)));
    CHECK_THROWS_AS(RationalFunction(x) / RationalFunction(), DivisionByZero);
    CHECK_THROWS_AS(RationalFunction().inverse(), DivisionByZero);
  }

  TEST_CASE("field axioms on random elements") {
    gen::Gen g(7);
    for (int trial = 0; trial < 150; ++trial) {
      RationalFunction a = g.field(3), b = g.field(3), c = g.field(3);
      CHECK((a + b) - b == a);
      CHECK(a * (b + c) == a * b + a * c);
      CHECK(a * b == b * a);
      if (!b.is_zero()) {
        CHECK((a * b) / b == a);
        CHECK(b * b.inverse() == RationalFunction(1));
      }
    }
  }

  TEST_CASE("derivative rules") {
    gen::Gen g(11);
    for (int trial = 0; trial < 100; ++trial) {
      RationalFunction a = g.field(2), b = g.field(2);
      std::size_t v = std::size_t(g.integer(0, 1));
      CHECK((a * b).derivative(v) == a.derivative(v) * b + a * b.derivative(v));
      if (!b.is_zero()) CHECK((a / b).derivative(v) == (a.derivative(v) * b - a * b.derivative(v)) / (b * b));
    }
  }

  TEST_CASE("substitution and dropping variables") {
    auto ctx = make_context({"x"}, {"a", "b"});
    RationalFunction x = RationalFunction::variable(0), a = RationalFunction::variable(1), b = RationalFunction::variable(2);
    RationalFunction f = (a * x + b) / (x + a);
    RationalFunction s = f.substitute(2, a * a);
    CHECK(s == a);
    CHECK(!s.depends_on(2));
    CHECK(s.drop_variable(2) == RationalFunction::variable(1));
    CHECK(f.substitute(1, b) == (b * x + b) / (x + b));
    CHECK_THROWS_AS(f.drop_variable(1), Error);
    CHECK(f.depends_on_range(1, 3));
    CHECK(!RationalFunction(x).depends_on_range(1, 3));
  }

  TEST_CASE("printing") {
    auto ctx = make_context({"x1"}, {"g"});
    Poly p = Poly::variable(0).pow(2).scaled(Rational(1, 2)) - Poly::variable(1);
    CHECK(p.to_string(*ctx) == "1/2*x1^2 - g");
    RationalFunction f(Poly(Rational(1)), Poly::variable(0) + Poly(Rational(1)));
    CHECK(f.to_string(*ctx) == "1/(x1 + 1)");
    CHECK(RationalFunction(Rational(-3, 4)).to_string(*ctx) == "-3/4");
  }

  TEST_CASE("context validation") {
    CHECK_THROWS_AS(make_context({"x", "x"}), Error);
    CHECK_THROWS_AS(make_context({"a", "b", "c", "d1", "e", "f", "g", "h", "i"}), Error);
    auto ctx = make_context({"x"}, {"p"});
    CHECK(ctx->index_of("p") == 1u);
    CHECK(!ctx->index_of("q"));
    CHECK_THROWS_AS(diff(RationalFunction::variable(1), 1, *ctx), UnknownVariable);
  }
}
