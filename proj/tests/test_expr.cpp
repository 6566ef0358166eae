#include "doctest.h"

#include <cmath>
#include <random>

#include "vst/expr.hpp"

using vst::Expr;

TEST_CASE("arithmetic precedence and associativity") {
    CHECK(Expr::parse("2+3*4").eval(0) == 14.0);
    CHECK(Expr::parse("2^3^2").eval(0) == 512.0);       // right associative
    CHECK(Expr::parse("(2^3)^2").eval(0) == 64.0);
    CHECK(Expr::parse("-2^2").eval(0) == -4.0);         // unary minus below ^
    CHECK(Expr::parse("(-2)^2").eval(0) == 4.0);
    CHECK(Expr::parse("2^-3").eval(0) == 0.125);
    CHECK(Expr::parse("10-4-3").eval(0) == 3.0);
    CHECK(Expr::parse("24/4/2").eval(0) == 3.0);
    CHECK(Expr::parse("2*3^2").eval(0) == 18.0);
}

TEST_CASE("variables, functions and constants") {
    Expr g = Expr::parse("(1+y)/x^5");
    CHECK(g.eval(1.0, 0.0) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(g.eval(2.0, 1.0) == doctest::Approx(0.0625).epsilon(1e-15));
    CHECK(g.uses_second_var());

    Expr f = Expr::parse("x^2/2");
    CHECK(f.eval(2.0) == doctest::Approx(2.0).epsilon(1e-15));
    CHECK_FALSE(f.uses_second_var());

    CHECK(Expr::parse("sin(x)").eval(0.0) == 0.0);
    CHECK(Expr::parse("cos(0)").eval(0.0) == 1.0);
    CHECK(Expr::parse("y/x^4").eval(1.0, 1.0) == 1.0);
    CHECK(Expr::parse("min(2, x)").eval(5.0) == 2.0);
    CHECK(Expr::parse("max(2, x)").eval(5.0) == 5.0);
    CHECK(Expr::parse("sin(pi)").eval(0.0) ==
          doctest::Approx(0.0).epsilon(1e-15));
    CHECK(Expr::parse("log(e)").eval(0.0) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(Expr::parse("sqrt(abs(-9))").eval(0.0) == 3.0);
}

TEST_CASE("custom variable names") {
    Expr b = Expr::parse("2^(-n)", "n", "");
    CHECK(b.eval(3.0) == 0.125);
    // The default grammar must reject "n".
    CHECK_THROWS_AS(Expr::parse("n+1"), vst::ParseError);
    // And an empty second name forbids that variable.
    CHECK_THROWS_AS(Expr::parse("n+y", "n", ""), vst::ParseError);
}

TEST_CASE("parse errors carry byte offsets") {
    auto offset_of = [](const char* text) -> std::size_t {
        try {
            (void)Expr::parse(text);
        } catch (const vst::ParseError& e) {
            return e.offset;
        }
        return static_cast<std::size_t>(-1);
    };
    CHECK(offset_of("x +") == 3);      // input ends where a term should start
    CHECK(offset_of("x + * y") == 4);
    CHECK(offset_of("foo + 1") == 0);
    CHECK(offset_of("x + bar") == 4);
    CHECK(offset_of("(x + 1") == 0);   // points at the unmatched '('
    CHECK(offset_of("x ) y") == 2);    // trailing junk
    CHECK_THROWS_AS(Expr::parse("sin(x, y)"), vst::ParseError);  // arity
    CHECK_THROWS_AS(Expr::parse("min(x)"), vst::ParseError);
    CHECK_THROWS_AS(Expr::parse("2x"), vst::ParseError);  // no implicit product
    CHECK_THROWS_AS(Expr::parse(""), vst::ParseError);
    CHECK_THROWS_AS(Expr::parse("floor(x)"), vst::ParseError);
}

TEST_CASE("evaluation failures") {
    CHECK_THROWS_AS(Expr::parse("x+y").eval(1.0), vst::EvalError);  // y missing
    CHECK_THROWS_AS(Expr::parse("1/x").eval(0.0), vst::EvalError);
    CHECK_THROWS_AS(Expr::parse("log(x)").eval(-1.0), vst::EvalError);
    CHECK_THROWS_AS(Expr::parse("log(x)").eval(0.0), vst::EvalError);
    CHECK_THROWS_AS(Expr::parse("sqrt(x)").eval(-4.0), vst::EvalError);
    CHECK_THROWS_AS(Expr::parse("exp(x)").eval(1e6), vst::EvalError);   // overflow
    CHECK_THROWS_AS(Expr::parse("x^x").eval(-0.5), vst::EvalError);     // NaN
}

TEST_CASE("evaluation is pure") {
    Expr g = Expr::parse("sin(x)*exp(-x/10)+y^2");
    double first = g.eval(1.75, -0.5);
    for (int i = 0; i < 100; ++i) {
        CHECK(g.eval(1.75, -0.5) == first);  // bit identical
    }
}

TEST_CASE("printed form parses back to the same function") {
    const char* samples[] = {
        "2+3*4",
        "2^3^2",
        "-x^2",
        "(-x)^2",
        "(1+y)/x^5",
        "x^2/2 - 1/(6*x^3)",
        "min(max(x, y), 2)*sin(x)/cos(y)",
        "-(x - y)/(x + y)",
        "1 - 2/x + 4/3/x^2",
        "sqrt(abs(x))^-y",
        "0.5*x^2 - -y",
    };
    std::mt19937 rng(20240817u);
    std::uniform_real_distribution<double> xs(0.5, 4.0), ys(-2.0, 2.0);
    for (const char* s : samples) {
        Expr e = Expr::parse(s);
        Expr r = Expr::parse(e.str());
        CAPTURE(s);
        CAPTURE(e.str());
        CHECK(r.str() == e.str());
        for (int i = 0; i < 1000; ++i) {
            double x = xs(rng), y = ys(rng);
            double a, b;
            try {
                a = e.eval(x, y);
            } catch (const vst::EvalError&) {
                CHECK_THROWS_AS((void)r.eval(x, y), vst::EvalError);
                continue;
            }
            b = r.eval(x, y);
            CHECK(a == b);  // bit identical round trip
        }
    }
}

TEST_CASE("numbers survive the round trip at full precision") {
    Expr e = Expr::parse("0.1+1e-17+123456789.123456789");
    Expr r = Expr::parse(e.str());
    CHECK(e.eval(0) == r.eval(0));
}
