#pragma once
#include <cstddef>
#include <vector>

#include "vst/problem.hpp"
#include "vst/solution.hpp"

namespace vst {

// Tolerances and guards for the adaptive stepper.
struct StepControl {
    double abs_tol = 1e-10;
    double rel_tol = 1e-10;
    double max_step = 0.05;
    double min_step = 1e-13;
    double bound = 1e12;  // abort once |y| or |y'| passes this
    std::size_t max_steps = 4'000'000;

    // For convergence studies: tighten everything by a factor of two.
    StepControl halved() const {
        StepControl c = *this;
        c.abs_tol *= 0.5;
        c.rel_tol *= 0.5;
        c.max_step *= 0.5;
        return c;
    }
};

// March the initial value problem
//     y'(x) = y'(a) - integral over (a, x] of F(t, y(t)) dsigma(t)
// from a to b.  On density stretches this is the classical equation
// y'' = -F(x, y) rho(x), handled by an embedded Dormand-Prince 5(4) pair;
// every atom t applies the impulse y'(t+) = y'(t-) - F(t, y(t)) * jump;
// where the measure has no density at all, the solution is propagated as
// the exact straight line.
Solution solve_ivp(const Problem& p, double y0, double yp0, double a, double b,
                   const StepControl& ctrl = {});

// The same dynamics for a unit-spaced sequence:
//     y_{n+1} - 2 y_n + y_{n-1} + b_n F(n, y_n) = 0,
// stepped forward as y_{n+1} = 2 y_n - y_{n-1} - b_n F(n, y_n).
// F is a formula in (x, y) evaluated at x = n; b is a formula in n.
// Returns y_0 .. y_N.
std::vector<double> solve_recurrence(const Expr& F, const Expr& b, double y0,
                                     double y1, std::size_t N);

// Scaling sequence and normalized coefficients produced by
// three_term_normalize below.
struct ThreeTermForm {
    std::vector<double> alpha;  // indices 0..N
    std::vector<double> beta;   // indices 0..N; beta[0] is unused and zero
};

// Chooses alpha with alpha_{n+1} = (c_{n-1}/c_n) alpha_{n-1} so that the
// substitution y_n = alpha_n w_n turns the three-term recurrence above into
//     w_{n+1} - 2 w_n + w_{n-1} + beta_n w_n = 0,
// beta_n = 2 + b_n alpha_n / (c_{n-1} alpha_{n-1}),  n >= 1.
// c and b are formulas in n.  The rewrite is verified by back substitution
// before returning.
ThreeTermForm three_term_normalize(const Expr& c, const Expr& b, double alpha0,
                                   double alpha1, std::size_t N);

}  // namespace vst
