// End-to-end acceptance gate.  Each criterion prints exactly one line,
//   criterion <n> PASS|FAIL <detail>
// and the process exit code is the number of failures.  Everything runs
// from closed-form oracles or hand-checked constants; no fixture files.

#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "vst/asymptotics.hpp"
#include "vst/fixedpoint.hpp"
#include "vst/hypotheses.hpp"
#include "vst/ivp.hpp"

using namespace vst;

namespace {

int failures = 0;

void report(int n, bool ok, const std::string& detail) {
    std::printf("criterion %2d %s %s\n", n, ok ? "PASS" : "FAIL",
                detail.c_str());
    if (!ok) ++failures;
}

std::string fmt(const char* pattern, double a, double b = 0.0) {
    char buf[200];
    std::snprintf(buf, sizeof buf, pattern, a, b);
    return buf;
}

void guarded(int n, const std::function<void()>& body) {
    try {
        body();
    } catch (const std::exception& e) {
        report(n, false, std::string("exception: ") + e.what());
    }
}

// Shared benchmark: F = (1+y)/x^5 against the Lebesgue carrier on [1, inf)
// with forcing x^2/2.  Closed forms for the first two operator images of
// the constant one:
//   (T 1)(x)   = x^2/2 - 1/(6 x^3)
//   (T^2 1)(x) = x^2/2 - 1/(4 x) - 1/(12 x^3) + 1/(252 x^6)
Problem decay_problem() {
    return Problem{Expr::parse("(1+y)/x^5"), Measure::lebesgue(1.0),
                   Expr::parse("x^2/2"), Expr::parse("1/x^5"), 0.5};
}

double image1_exact(double x) { return x * x / 2 - 1 / (6 * std::pow(x, 3)); }
double image2_exact(double x) {
    return x * x / 2 - 1 / (4 * x) - 1 / (12 * std::pow(x, 3)) +
           1 / (252 * std::pow(x, 6));
}

// Forced oscillator with closed-form solution sin(x) - 1/(6 (x+1)^2).
Problem forced_problem() {
    return Problem{Expr::parse("(x+1)^(-4) + sin(x)"), Measure::lebesgue(0.0),
                   std::nullopt, std::nullopt, std::nullopt};
}
double forced_exact(double x) {
    return std::sin(x) - 1.0 / (6.0 * (x + 1.0) * (x + 1.0));
}

double forced_error(const StepControl& ctrl) {
    Solution sol = solve_ivp(forced_problem(), -1.0 / 6.0, 4.0 / 3.0, 0.0, 50.0,
                             ctrl);
    double worst = 0.0;
    for (std::size_t i = 0; i < sol.size(); ++i)
        worst = std::max(worst, std::fabs(sol.values()[i] -
                                          forced_exact(sol.grid()[i])));
    return worst;
}

void criterion1() {
    Problem p = decay_problem();
    const std::vector<double> probes = {3.0, 5.0, 10.0, 30.0};
    FixpointOptions opts;
    opts.grid_nodes = 1200;
    opts.extra_nodes = probes;
    auto grid = fixpoint_grid(p.measure, 3.0, 2000.0, opts);

    OperatorImage im1 = apply_T([](double) { return 1.0; }, p, *p.f, grid, opts);
    double worst = 0.0;
    for (double x : probes)
        worst = std::max(worst, std::fabs(im1.fn(x) - image1_exact(x)));
    OperatorImage im2 =
        apply_T([&](double x) { return im1.fn(x); }, p, *p.f, grid, opts);
    for (double x : probes)
        worst = std::max(worst, std::fabs(im2.fn(x) - image2_exact(x)));
    report(1, worst <= 1e-9,
           fmt("two operator images match their closed forms at the probe "
               "points (max err %.2e, tol 1e-9)", worst));
}

void criterion2() {
    Problem p = decay_problem();
    auto [sol, rep] = picard_solve(p, StartFromF{}, 3.0, 2000.0, 1e-10, 40);
    bool ok = rep.converged;
    double ratio = 0.0;
    for (std::size_t i = 0; i < sol.size(); ++i)
        ratio = std::max(ratio, std::fabs(sol.values()[i] /
                                          p.f->eval(sol.grid()[i])));
    ok = ok && ratio <= 2.0;
    // |y - x^2/2| must shrink monotonically along the tail.
    double prev = -1.0;
    bool shrinking = true;
    for (std::size_t i = 0; i < sol.size(); ++i) {
        double x = sol.grid()[i];
        if (x < 10.0) continue;
        double d = std::fabs(sol.values()[i] - x * x / 2);
        if (prev >= 0.0 && d > prev * (1 + 1e-6) + 1e-12) shrinking = false;
        prev = d;
    }
    ok = ok && shrinking;
    report(2, ok,
           fmt("picard converges, stays within 2|f| (sup ratio %.6f) and "
               "|y - f| decreases past x = 10", ratio));
}

void criterion3() {
    Problem p = forced_problem();
    Solution sol = solve_ivp(p, -1.0 / 6.0, 4.0 / 3.0, 0.0, 50.0);
    double worst = 0.0;
    for (std::size_t i = 0; i < sol.size(); ++i) {
        double x = sol.grid()[i];
        worst = std::max(worst, std::fabs(sol.values()[i] - forced_exact(x)));
        if (i + 1 < sol.size()) {
            double xm = 0.5 * (x + sol.grid()[i + 1]);
            worst = std::max(worst, std::fabs(sol.eval(xm) - forced_exact(xm)));
        }
    }
    report(3, worst <= 1e-6,
           fmt("oscillator trajectory within %.2e of the closed form on "
               "[0, 50] (tol 1e-6)", worst));
}

void criterion4() {
    Problem p{Expr::parse("y/x^4"), Measure::lebesgue(1.0),
              Expr::parse("1+1/(6*x^2)"), Expr::parse("1/x^4"), 1.0};
    auto [sol, rep] = picard_solve(p, 0.5, 1.0, 300.0, 1e-11, 30);
    double worst = 0.0;
    for (double y : sol.values()) worst = std::max(worst, std::fabs(y - 1.0));
    auto pair = verify_subsuper(Expr::parse("1/2"), Expr::parse("2"), p, 1.0);
    bool ok = rep.converged && worst <= 1e-8 && pair.verdict == Verdict::Holds;
    report(4, ok,
           fmt("iteration from 1/2 lands on the unit plateau (max dev %.2e) "
               "and the pair (1/2, 2) encloses it", worst));
}

void criterion5() {
    Problem p = decay_problem();
    auto con = check_contraction(*p.k, p.measure, 3.0);
    double cerr = std::fabs(con.value - 1.0 / 81.0);
    double x0 = find_x0(p);
    bool ok = con.verdict == Verdict::Holds && cerr <= 1e-6 &&
              std::fabs(x0 - 2.0) <= 0.01 &&
              check_smallness_at(p, 3.0).verdict == Verdict::Holds;
    report(5, ok,
           fmt("contraction constant 1/81 (err %.2e) and admissibility "
               "threshold at x = %.4f", cerr, x0));
}

void criterion6() {
    std::mt19937 rng(20240815u);
    std::uniform_real_distribution<double> seed(-0.5, 0.5);
    std::uniform_real_distribution<double> coef(-0.4, 0.4);
    const std::size_t N = 12;
    const Expr F = Expr::parse("sin(y)");
    int done = 0, attempts = 0;
    double worst = 0.0;
    while (done < 20 && attempts < 200) {
        ++attempts;
        double y0 = seed(rng), y1 = seed(rng);
        char bs[96];
        std::snprintf(bs, sizeof bs, "%.17g + %.17g*(n+1)^(-2)", coef(rng),
                      coef(rng));
        Expr b = Expr::parse(bs, "n", "");
        auto rec = solve_recurrence(F, b, y0, y1, N);
        double amp = 0.0;
        for (double y : rec) amp = std::max(amp, std::fabs(y));
        if (amp > 3.0) continue;  // keep the comparison well conditioned
        Problem p{F, Measure::pure_step(b, 0), std::nullopt, std::nullopt,
                  std::nullopt};
        Solution sol = solve_ivp(p, y0, y1 - y0, 0.0, static_cast<double>(N));
        for (std::size_t n = 0; n <= N; ++n) {
            double e = std::fabs(sol.eval(static_cast<double>(n)) - rec[n]) /
                       std::max(1.0, std::fabs(rec[n]));
            worst = std::max(worst, e);
        }
        ++done;
    }
    report(6, done == 20 && worst <= 1e-12,
           fmt("20 random difference schemes agree with the impulse march "
               "(worst rel err %.2e, tol 1e-12)", worst));
}

void criterion7() {
    Measure leb = Measure::lebesgue(1.0);
    auto quartic = nehari_check(Expr::parse("y/x^4"), leb, 2.0, 1.0);
    auto harmonic = nehari_check(Expr::parse("y/x"), leb, 1.0, 1.0);
    Measure steps = Measure::pure_step(Expr::parse("1", "n", ""), 1);
    auto geometric = nehari_check(Expr::parse("y*2^(-x)"), steps, 3.0, 0.0);
    bool ok = quartic.verdict == Verdict::Holds &&
              std::fabs(quartic.value - 1.0) <= 1e-8 &&
              harmonic.verdict == Verdict::Fails &&
              geometric.verdict == Verdict::Holds &&
              std::fabs(geometric.value - 6.0) <= 1e-10;
    report(7, ok,
           fmt("first-moment checks: quartic M/2 (err %.2e), harmonic "
               "divergent, geometric 2M (err %.2e)",
               std::fabs(quartic.value - 1.0),
               std::fabs(geometric.value - 6.0)));
}

void criterion8() {
    // Constant forcing A = 2: the solution must rise monotonically and stay
    // inside [A/2, A].
    Problem p{Expr::parse("y/x^4"), Measure::lebesgue(1.0), Expr::parse("2"),
              Expr::parse("1/x^4"), 2.0};
    auto [sol, rep] = picard_solve(p, StartFromF{}, 1.0, 300.0, 1e-11, 30);
    bool ok = rep.converged;
    double lo = 1e9, hi = -1e9;
    for (std::size_t i = 0; i < sol.size(); ++i) {
        lo = std::min(lo, sol.values()[i]);
        hi = std::max(hi, sol.values()[i]);
        if (i > 0 && sol.values()[i] < sol.values()[i - 1] - 1e-10) ok = false;
    }
    ok = ok && lo >= 1.0 && hi <= 2.0 + 1e-12;
    report(8, ok,
           fmt("monotone solution pinned between A/2 and A (range [%.6f, "
               "%.6f])", lo, hi));
}

void criterion9() {
    // Unit oscillator: E = v^2/2 + y^2/2 stays at 1/2 exactly.
    Solution osc("synthetic", "none");
    for (int i = 0; i <= 600; ++i) {
        double x = 0.1 * i;
        osc.push_node(x, std::sin(x), std::cos(x), std::cos(x));
    }
    auto flat = energy_profile(osc, Expr::parse("1"));
    double dev = 0.0;
    for (const auto& pt : flat) dev = std::max(dev, std::fabs(pt.energy - 0.5));

    // Weakening restoring factor: the energy may only decay.
    Problem p{Expr::parse("y/(1+x)"), Measure::lebesgue(0.0), std::nullopt,
              std::nullopt, std::nullopt};
    auto damped = energy_profile(solve_ivp(p, 1.0, 0.0, 0.0, 30.0),
                                 Expr::parse("1/(1+x)"));
    bool monotone = true;
    for (std::size_t i = 1; i < damped.size(); ++i)
        if (damped[i].energy >
            damped[i - 1].energy + 1e-7 * (1 + damped[i - 1].energy))
            monotone = false;
    report(9, dev <= 1e-9 && monotone,
           fmt("oscillator energy constant to %.2e; decaying factor gives a "
               "non-increasing profile", dev));
}

void criterion10() {
    StepControl loose;
    loose.abs_tol = loose.rel_tol = 1e-4;
    loose.max_step = 0.2;
    double e1 = forced_error(loose);
    double e2 = forced_error(loose.halved());
    bool ok = e2 > 0 && e1 / e2 >= 4.0;
    report(10, ok,
           fmt("halved step control cuts the error %.1fx (from %.2e)",
               e2 > 0 ? e1 / e2 : 0.0, e1));
}

}  // namespace

int main() {
    guarded(1, criterion1);
    guarded(2, criterion2);
    guarded(3, criterion3);
    guarded(4, criterion4);
    guarded(5, criterion5);
    guarded(6, criterion6);
    guarded(7, criterion7);
    guarded(8, criterion8);
    guarded(9, criterion9);
    guarded(10, criterion10);
    std::printf("acceptance: %d/10 passed\n", 10 - failures);
    return failures;
}
