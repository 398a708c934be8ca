#include <doctest.h>

#include <chrono>
#include <cmath>
#include <map>
#include <numbers>
#include <set>

#include "aef/expr.hpp"
#include "aef/parse.hpp"
#include "aef/program.hpp"
#include "aef/rational.hpp"
#include "aef/zero_test.hpp"
#include "support.hpp"

using namespace aef;
using aeftest::P;

TEST_SUITE("rational") {
  TEST_CASE("reduces and normalizes sign") {
    Rational r(6, -4);
    CHECK(r.num() == -3);
    CHECK(r.den() == 2);
    CHECK((Rational(1, 3) + Rational(1, 6)) == Rational(1, 2));
    CHECK((Rational(2, 3) * Rational(3, 4)) == Rational(1, 2));
    CHECK((Rational(1, 2) / Rational(1, 4)) == Rational(2));
    CHECK(Rational(2, 3).pow(-2) == Rational(9, 4));
    CHECK(Rational(1, 3) < Rational(1, 2));
  }

  TEST_CASE("rejects zero denominators and overflow") {
    CHECK_THROWS_AS(Rational(1, 0), std::domain_error);
    CHECK_THROWS_AS(Rational(1) / Rational(0), std::domain_error);
    CHECK_THROWS_AS(Rational(0).pow(-1), std::domain_error);
    Rational big(std::int64_t{1} << 62);
    CHECK_THROWS_AS(big * big, std::overflow_error);
  }

  TEST_CASE("decimal literals and best approximations") {
    CHECK(Rational::from_decimal("0.125") == Rational(1, 8));
    CHECK(Rational::from_decimal("12") == Rational(12));
    Rational out;
    REQUIRE(Rational::approximate(0.333333333333, 100, 1e-9, out));
    CHECK(out == Rational(1, 3));
    CHECK_FALSE(Rational::approximate(std::numbers::pi, 100, 1e-12, out));
  }
}

TEST_SUITE("parse") {
  TEST_CASE("products, calls and opaque functions") {
    auto t = aeftest::standard_table();
    Expr e = parse("u2*u3", t);
    REQUIRE(e.kind() == Kind::Mul);
    CHECK(e.args().size() == 2);
    CHECK(e.args()[0] == Expr::coord(2));
    CHECK(e.args()[1] == Expr::coord(3));

    Expr f = parse("a0(u0)*exp(u3)", t);
    REQUIRE(f.kind() == Kind::Mul);
    CHECK(f.args()[0].kind() == Kind::Opaque);
    CHECK(f.args()[1].kind() == Kind::Call);
    CHECK(f.args()[1].fn() == Fn::Exp);

    Expr d = parse("a1''(u0)", t);
    CHECK(d.kind() == Kind::Opaque);
    CHECK(d.order() == 2);
  }

  TEST_CASE("identities are not simplified away") {
    auto t = aeftest::standard_table();
    Expr e = parse("sin(u1)^2 + cos(u1)^2 - 1", t);
    CHECK(e.kind() == Kind::Add);
    CHECK_FALSE(normalize(e).is_zero_literal());
  }

  TEST_CASE("precedence and associativity") {
    auto t = aeftest::standard_table();
    Point p;
    p.u = {0.0, 2.0, 3.0, 0.5};
    CHECK(evaluate(parse("-u1^2", t), p) == doctest::Approx(-4.0));
    CHECK(evaluate(parse("u1^u1^u3", t), p) == doctest::Approx(std::pow(2.0, std::pow(2.0, 0.5))));
    CHECK(evaluate(parse("u2 - u1 - u3", t), p) == doctest::Approx(0.5));
    CHECK(evaluate(parse("u2/u1/u3", t), p) == doctest::Approx(3.0));
    CHECK(parse("1/3", t).as_rational() == Rational(1, 3));
  }

  TEST_CASE("malformed input reports a position") {
    auto t = aeftest::standard_table();
    CHECK_THROWS_AS(parse("u1 +", t), ParseError);
    CHECK_THROWS_AS(parse("(u1", t), ParseError);
    CHECK_THROWS_AS(parse("nosuch", t), ParseError);
    CHECK_THROWS_AS(parse("tan(u1)", t), ParseError);
    CHECK_THROWS_AS(parse("a0(u1)", t), ParseError);
    CHECK_THROWS_AS(parse("u1/0", t), std::exception);
    try {
      parse("u1 * * u2", t);
      FAIL("expected a parse error");
    } catch (const ParseError& e) {
      CHECK(e.position() == 5);
    }
  }

  TEST_CASE("render round-trips parsed and canonical trees") {
    auto t = aeftest::standard_table();
    for (const char* s : {"u2*u3", "a0(u0)*exp(u3)", "-u1^2", "(u1 + u2)^(1/2)", "a0'(u0)/(u3^2 + 2*u3*sin(c) + 1)",
                          "atan((u3 + sin(c))/cos(c))", "-(u1 - u2)", "2^-u1"}) {
      CAPTURE(s);
      Expr e = parse(s, t);
      CHECK(parse(render(e, t), t) == e);
      Expr c = normalize(e);
      CHECK(normalize(parse(render(c, t), t)) == c);
    }
    aeftest::ExprGen gen(7);  // depth 3 covers nested quotients
    for (int i = 0; i < 300; ++i) {
      Expr c = normalize(gen.gen(3));
      std::string r = render(c, t);
      CAPTURE(r);
      CHECK(normalize(parse(r, t)) == c);
    }
  }
}

TEST_SUITE("differentiate") {
  TEST_CASE("basic rules") {
    auto t = aeftest::standard_table();
    CHECK(diff(P("u2*u3", t), 2) == P("u3", t));
    CHECK(normalize(diff(P("a0(u0)*exp(u3)", t), 3)) == P("a0(u0)*exp(u3)", t));
    CHECK(diff(P("a1(u0)", t), 0) == P("a1'(u0)", t));
    CHECK(diff(P("a1(u0)", t), 1).is_zero_literal());
    CHECK(differentiate(P("sin(c)*u1", t), Var::param(1)) == P("cos(c)*u1", t));
  }

  TEST_CASE("agrees with central differences") {
    auto t = aeftest::standard_table();
    aeftest::ExprGen gen(11);
    int checked = 0;
    for (int i = 0; i < 200; ++i) {
      Expr e = gen.gen(3);
      int k = 1 + gen.pick(3);
      Expr d = diff(e, k);
      Point p = aeftest::random_point(t, gen.rng());
      try {
        const double h = 1e-5;
        Point a = p, b = p;
        a.u[k] += h;
        b.u[k] -= h;
        double fd = (evaluate(e, a) - evaluate(e, b)) / (2 * h);
        double exact = evaluate(d, p);
        CHECK(std::fabs(fd - exact) <= 1e-5 * (1 + std::fabs(exact)));
        ++checked;
      } catch (const std::runtime_error&) {
      }
    }
    CHECK(checked > 150);
  }

  TEST_CASE("linearity, product rule and symmetry of mixed partials") {
    auto t = aeftest::standard_table();
    ZeroTester z(t);
    aeftest::ExprGen gen(5);
    for (int i = 0; i < 60; ++i) {
      Expr f = gen.gen(2), g = gen.gen(2);
      int a = gen.pick(4), b = gen.pick(4);
      Expr k = P("3 - sin(c)", t);  // constant along coordinates
      CHECK(z.is_zero(diff(k * f + g, a) - (k * diff(f, a) + diff(g, a))));
      CHECK(z.is_zero(diff(f * g, a) - (diff(f, a) * g + f * diff(g, a))));
      CHECK(z.is_zero(diff(diff(f, a), b) - diff(diff(f, b), a)));
    }
  }
}

TEST_SUITE("evaluate") {
  TEST_CASE("point values") {
    auto t = aeftest::standard_table();
    Point p;
    p.u = {0, 0, 2, 3};
    CHECK(evaluate(P("u2*u3", t), p) == 6.0);
    p.u[1] = 0.7;
    CHECK(evaluate(parse("sin(u1)^2+cos(u1)^2", t), p) == doctest::Approx(1.0).epsilon(1e-15));
    p.u[3] = 1.0;
    p.params = {1.0, std::numbers::pi / 6};
    CHECK(evaluate(P("u3^2 + 2*u3*sin(c) + 1", t), p) == doctest::Approx(3.0).epsilon(1e-15));
    p.opaque = {{2.0, 5.0}, {1.0}, {1.0}};
    CHECK(evaluate(P("a0'(u0)*a0(u0)", t), p) == 10.0);
  }

  TEST_CASE("near-zero denominators and non-finite values are reported") {
    auto t = aeftest::standard_table();
    Point p;
    p.u = {0, 1, 1, 0};
    CHECK_THROWS_AS(evaluate(P("1/(u1 - u2)", t), p, 1e-9), DivisionNearZero);
    CHECK_THROWS_AS(evaluate(P("log(u3)", t), p), NonFiniteValue);
  }

  TEST_CASE("shared subexpressions are compiled once") {
    auto t = aeftest::standard_table();
    Expr s = P("sin(u1*u2 + u3)", t);
    Program prog({s * s, s + Expr(1), exp(s)});
    std::vector<double> out;
    Point p;
    p.u = {0, 0.3, 0.4, 0.5};
    REQUIRE(prog.run(p, 0.0, out) == EvalStatus::Ok);
    double v = std::sin(0.3 * 0.4 + 0.5);
    CHECK(out[0] == doctest::Approx(v * v));
    CHECK(out[1] == doctest::Approx(v + 1));
    CHECK(out[2] == doctest::Approx(std::exp(v)));
    CHECK(prog.outputs() == 3);
    CHECK(prog.size() < 12);
  }
}

TEST_SUITE("zero test") {
  TEST_CASE("identities are recognised") {
    auto t = aeftest::standard_table();
    CHECK(is_zero(parse("sin(u1)^2 + cos(u1)^2 - 1", t), t));
    CHECK(is_zero(parse("cosh(u2)^2 - sinh(u2)^2 - 1", t), t));
    CHECK(is_zero(parse("exp(u1)*exp(-u1) - 1", t), t));
    CHECK(is_zero(parse("(a0(u0) + u1)^2 - a0(u0)^2 - 2*a0(u0)*u1 - u1^2", t), t));
  }

  TEST_CASE("non-identities come with a witness") {
    auto t = aeftest::standard_table();
    ZeroTester z(t);
    Expr e = parse("u2*u3 - u3", t);
    auto r = z.test(e);
    REQUIRE_FALSE(r.zero);
    REQUIRE(r.witness);
    CHECK(std::fabs(evaluate(e, r.witness->point)) > 1e-9);
    CHECK(r.witness->value == doctest::Approx(evaluate(e, r.witness->point)));
  }

  TEST_CASE("finite-set parameters are enumerated") {
    auto t = aeftest::standard_table();
    // Vanishes for e0 = 1 only.
    CHECK_FALSE(is_zero(parse("e0^2 - e0", t), t));
    CHECK(is_zero(parse("e0^2 - 1", t), t));
  }

  TEST_CASE("same seed gives the same samples") {
    auto t = aeftest::standard_table();
    Sampler a(t, 42), b(t, 42);
    for (int i = 0; i < 5; ++i) {
      Point p = a.draw(), q = b.draw();
      CHECK(p.u == q.u);
      CHECK(p.params == q.params);
    }
  }

  TEST_CASE("soundness battery: nonzero polynomials are never declared zero") {
    aef::SymbolTable t;
    std::mt19937_64 rng(20240601);
    std::uniform_int_distribution<int> coef(-5, 5), nterms(1, 8), deg(0, 6);
    ZeroTester z(t);
    int false_positives = 0;
    auto start = std::chrono::steady_clock::now();
    for (int i = 0; i < 1000; ++i) {
      std::map<std::array<int, 4>, int> poly;
      int n = nterms(rng);
      while (static_cast<int>(poly.size()) < n) {
        std::array<int, 4> m{};
        int total = deg(rng);
        for (int k = 0; k < total; ++k) ++m[std::uniform_int_distribution<int>(0, 3)(rng)];
        int c = coef(rng);
        if (c != 0) poly[m] = c;
      }
      std::vector<Expr> terms;
      for (const auto& [m, c] : poly) {
        std::vector<Expr> f{Expr(c)};
        for (int k = 0; k < 4; ++k)
          if (m[k] > 0) f.push_back(aef::pow(Expr::coord(k), Expr(m[k])));
        terms.push_back(mul(f));
      }
      if (z.is_zero(add(terms))) ++false_positives;
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    CHECK(false_positives == 0);
    CHECK(secs < 30.0);
  }
}

TEST_SUITE("normalize") {
  TEST_CASE("folding and cancellation") {
    auto t = aeftest::standard_table();
    CHECK(normalize(parse("u2 + u2", t)) == normalize(parse("2*u2", t)));
    CHECK(normalize(parse("(u2*u3)/u3", t)) == Expr::coord(2));
    CHECK(normalize(parse("u2*u3 - u3*u2", t)).is_zero_literal());
    CHECK(normalize(parse("exp(u1)*exp(u2)", t)) == normalize(parse("exp(u1 + u2)", t)));
    CHECK(normalize(parse("2/4 + 1/4", t)) == Expr(Rational(3, 4)));
  }

  TEST_CASE("idempotent and value preserving") {
    auto t = aeftest::standard_table();
    aeftest::ExprGen gen(3);
    for (int i = 0; i < 300; ++i) {
      Expr raw = gen.gen(3);
      Expr n = normalize(raw);
      CHECK(normalize(n) == n);
      Point p = aeftest::random_point(t, gen.rng());
      try {
        double a = evaluate(raw, p), b = evaluate(n, p);
        CHECK(std::fabs(a - b) <= 1e-9 * (1 + std::fabs(a)));
      } catch (const std::runtime_error&) {
      }
    }
  }

  TEST_CASE("equal trees hash equally and compare as equal") {
    auto t = aeftest::standard_table();
    Expr a = P("u1*u2 + sin(u3)", t), b = P("sin(u3) + u2*u1", t);
    CHECK(a == b);
    CHECK(a.hash() == b.hash());
    CHECK(compare(a, b) == 0);
    CHECK(compare(Expr::coord(1), Expr::coord(2)) == -compare(Expr::coord(2), Expr::coord(1)));
  }

  TEST_CASE("dependency queries") {
    auto t = aeftest::standard_table();
    Expr e = P("a0(u0)*u3 + sin(c)", t);
    CHECK(depends_on(e, Var::coord(3)));
    CHECK(depends_on(e, Var::coord(0)));
    CHECK_FALSE(depends_on(e, Var::coord(1)));
    CHECK(depends_on(e, Var::param(1)));
    CHECK(contains_opaque(e));
    CHECK_FALSE(depends_on_coordinates(P("sin(c)*2", t)));
  }
}
