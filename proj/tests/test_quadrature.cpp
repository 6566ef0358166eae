#include "doctest.h"

#include <cmath>
#include <random>

#include "vst/measure.hpp"
#include "vst/quadrature.hpp"

using vst::Expr;
using vst::Measure;
using vst::TailOptions;
using vst::Variation;

namespace {
Expr in_n(const char* s) { return Expr::parse(s, "n", ""); }
}

TEST_CASE("plain adaptive integration") {
    auto one = [](double) { return 1.0; };
    CHECK(vst::integrate_adaptive(one, 1.0, 2.0, 1e-12) ==
          doctest::Approx(1.0).epsilon(1e-14));
    CHECK(vst::integrate_adaptive([](double x) { return std::sin(x); }, 0.0,
                                  M_PI, 1e-13) ==
          doctest::Approx(2.0).epsilon(1e-13));
    CHECK(vst::integrate_adaptive(one, 3.0, 3.0, 1e-12) == 0.0);
    CHECK_THROWS_AS(vst::integrate_adaptive(one, 2.0, 1.0, 1e-12),
                    vst::QuadratureError);
}

TEST_CASE("stieltjes integral against the identity measure") {
    Measure m = Measure::lebesgue(0.0);
    CHECK(vst::stieltjes_integral([](double) { return 1.0; }, m, 1.0, 2.0,
                                  1e-12) == doctest::Approx(1.0).epsilon(1e-14));
    // (t-1)/t^4 over [1, 50]; antiderivative -1/(2t^2) + 1/(3t^3)
    auto g = [](double t) { return (t - 1.0) / std::pow(t, 4); };
    double exact = (0.5 - 1.0 / 3.0) -
                   (0.5 / (50.0 * 50.0) - 1.0 / (3.0 * 50.0 * 50.0 * 50.0));
    CHECK(vst::stieltjes_integral(g, m, 1.0, 50.0, 1e-12) ==
          doctest::Approx(exact).epsilon(1e-12));
}

TEST_CASE("pure step integrals are exact finite sums") {
    // weights -1 at t = 1, 2, 3 with g(t) = t
    Measure m = Measure::from_parts(
        0.0, {{1.0, -1.0}, {2.0, -1.0}, {3.0, -1.0}}, {}, {});
    double v = vst::stieltjes_integral([](double t) { return t; }, m, 0.0, 3.0,
                                       1e-15);
    CHECK(v == -6.0);

    Measure w = Measure::pure_step(in_n("n"), 1, 5);
    double s = vst::stieltjes_integral([](double t) { return t * t; }, w, 0.0,
                                       10.0, 1e-15);
    CHECK(s == 1.0 + 2.0 * 4 + 3.0 * 9 + 4.0 * 16 + 5.0 * 25);
}

TEST_CASE("atom endpoint convention is half open") {
    Measure m = Measure::from_parts(0.0, {{1.0, 10.0}, {2.0, 100.0}}, {}, {});
    auto one = [](double) { return 1.0; };
    // left endpoint excluded, right included
    CHECK(vst::stieltjes_integral(one, m, 1.0, 2.0, 1e-14) == 100.0);
    CHECK(vst::stieltjes_integral(one, m, 0.5, 2.0, 1e-14) == 110.0);
    CHECK(vst::stieltjes_integral(one, m, 0.5, 1.999, 1e-14) == 10.0);
}

TEST_CASE("splitting an interval preserves the integral") {
    Measure m = Measure::from_parts(
        0.0, {{1.5, 2.0}, {2.25, -0.5}}, {},
        {{0.0, 4.0, Expr::parse("cos(x)+2")}});
    auto g = [](double t) { return t * t - 0.25 * t; };
    double whole = vst::stieltjes_integral(g, m, 0.0, 4.0, 1e-12);
    std::mt19937 rng(11u);
    std::uniform_real_distribution<double> cut(0.0, 4.0);
    for (int i = 0; i < 20; ++i) {
        double c = cut(rng);
        double parts = vst::stieltjes_integral(g, m, 0.0, c, 5e-13) +
                       vst::stieltjes_integral(g, m, c, 4.0, 5e-13);
        CHECK(whole == doctest::Approx(parts).epsilon(1e-10));
    }
    // cut exactly at an atom: the atom lands in the left part
    double parts = vst::stieltjes_integral(g, m, 0.0, 1.5, 5e-13) +
                   vst::stieltjes_integral(g, m, 1.5, 4.0, 5e-13);
    CHECK(whole == doctest::Approx(parts).epsilon(1e-10));
}

TEST_CASE("integration is linear in the integrand") {
    Measure m = Measure::from_parts(
        1.0, {{2.0, 0.75}}, {}, {{1.0, 6.0, Expr::parse("1/x")}});
    auto g = [](double t) { return std::sin(t); };
    auto h = [](double t) { return t - 3.0; };
    auto combo = [&](double t) { return 2.0 * g(t) - 3.0 * h(t); };
    double lhs = vst::stieltjes_integral(combo, m, 1.0, 6.0, 1e-12);
    double rhs = 2.0 * vst::stieltjes_integral(g, m, 1.0, 6.0, 1e-12) -
                 3.0 * vst::stieltjes_integral(h, m, 1.0, 6.0, 1e-12);
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-10));
}

TEST_CASE("total variation weighting") {
    Measure m = Measure::from_parts(0.0, {{1.0, -2.0}}, {},
                                    {{2.0, 3.0, Expr::parse("-4")}});
    auto one = [](double) { return 1.0; };
    CHECK(vst::stieltjes_integral(one, m, 0.0, 3.0, 1e-13) ==
          doctest::Approx(-6.0).epsilon(1e-13));
    CHECK(vst::stieltjes_integral(one, m, 0.0, 3.0, 1e-13,
                                  Variation::Absolute) ==
          doctest::Approx(6.0).epsilon(1e-13));
}

TEST_CASE("tail integral of a convergent density") {
    Measure m = Measure::lebesgue(1.0);
    auto g = [](double t) { return std::pow(t, -4.0); };
    TailOptions opts;
    opts.tol = 1e-12;
    auto r = vst::tail_integral(g, m, 3.0, opts);
    CHECK(r.converged);
    CHECK(r.value == doctest::Approx(1.0 / 81.0).epsilon(1e-9));
    CHECK(r.tail_estimate <= opts.tol);  // converged means the bound is met
    CHECK(r.x_reached > 3.0);
    CHECK(r.segments_used >= 2);
}

TEST_CASE("tail integral flags divergence") {
    Measure m = Measure::lebesgue(1.0);
    auto r = vst::tail_integral([](double t) { return 1.0 / t; }, m, 1.0);
    CHECK_FALSE(r.converged);
    CHECK(r.segments_used == TailOptions{}.max_windows);
    // each window contributes log 2
    CHECK(r.tail_estimate == doctest::Approx(std::log(2.0)).epsilon(1e-8));
}

TEST_CASE("tail integral of nothing converges immediately") {
    Measure m = Measure::lebesgue(0.0);
    auto r = vst::tail_integral([](double) { return 0.0; }, m, 0.0);
    CHECK(r.converged);
    CHECK(r.value == 0.0);
    CHECK(r.segments_used == 2);
}

TEST_CASE("tail integral over a pure step matches the series") {
    // sum over n>=1 of n * 2^-n = 2
    Measure m = Measure::pure_step(in_n("2^(-n)"), 1);
    auto r = vst::tail_integral([](double t) { return t; }, m, 0.0);
    CHECK(r.converged);
    CHECK(r.value == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("tail integral does not stop short of an isolated atom") {
    // Windows (0,1] and (1,2] are empty; the scan must still reach 37.
    Measure m = Measure::from_parts(0.0, {{37.0, 0.25}}, {}, {});
    auto r = vst::tail_integral([](double t) { return t; }, m, 0.0);
    CHECK(r.converged);
    CHECK(r.value == doctest::Approx(37.0 * 0.25).epsilon(1e-14));

    // Same for a gap before a far density segment.
    Measure d = Measure::from_parts(
        0.0, {}, {}, {{100.0, 101.0, Expr::parse("1")}});
    auto s = vst::tail_integral([](double) { return 1.0; }, d, 0.0);
    CHECK(s.converged);
    CHECK(s.value == doctest::Approx(1.0).epsilon(1e-12));

    // A bounded rule ending at n = 40 is also reached in full.
    Measure p = Measure::pure_step(in_n("1"), 35, 6);
    auto q = vst::tail_integral([](double) { return 1.0; }, p, 0.0);
    CHECK(q.converged);
    CHECK(q.value == doctest::Approx(6.0).epsilon(1e-14));
}

TEST_CASE("partial sums grow monotonically for nonnegative data") {
    Measure m = Measure::lebesgue(1.0);
    auto g = [](double t) { return std::pow(t, -3.0); };
    TailOptions opts;
    double prev = 0.0;
    for (int w = 1; w <= 8; ++w) {
        opts.max_windows = w;
        auto r = vst::tail_integral(g, m, 1.0, opts);
        CHECK(r.value >= prev);
        CHECK(r.value <= 0.5 + 1e-12);
        prev = r.value;
    }
}
