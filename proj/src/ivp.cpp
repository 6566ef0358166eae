#include "vst/ivp.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace vst {

namespace {

// Dormand-Prince 5(4) tableau.
constexpr double A21 = 1.0 / 5;
constexpr double A31 = 3.0 / 40, A32 = 9.0 / 40;
constexpr double A41 = 44.0 / 45, A42 = -56.0 / 15, A43 = 32.0 / 9;
constexpr double A51 = 19372.0 / 6561, A52 = -25360.0 / 2187,
                 A53 = 64448.0 / 6561, A54 = -212.0 / 729;
constexpr double A61 = 9017.0 / 3168, A62 = -355.0 / 33, A63 = 46732.0 / 5247,
                 A64 = 49.0 / 176, A65 = -5103.0 / 18656;
constexpr double B1 = 35.0 / 384, B3 = 500.0 / 1113, B4 = 125.0 / 192,
                 B5 = -2187.0 / 6784, B6 = 11.0 / 84;
// Difference between the 5th and the embedded 4th order weights.
constexpr double E1 = 71.0 / 57600, E3 = -71.0 / 16695, E4 = 71.0 / 1920,
                 E5 = -17253.0 / 339200, E6 = 22.0 / 525, E7 = -1.0 / 40;
constexpr double C2 = 1.0 / 5, C3 = 3.0 / 10, C4 = 4.0 / 5, C5 = 8.0 / 9;

struct State {
    double y;
    double v;
};

[[noreturn]] void rhs_failure(double x, const char* what) {
    throw SolverError("right-hand side evaluation failed at x=" +
                      std::to_string(x) + ": " + what);
}

class Stepper {
public:
    Stepper(const Problem& p, const StepControl& ctrl, Solution& sol,
            std::size_t& steps_left)
        : p_(p), ctrl_(ctrl), sol_(sol), steps_left_(steps_left) {}

    // Integrate y'' = -F(x,y) rho(x) over [x0, x1], recording every
    // accepted step.  Returns the state at x1.
    State run(double x0, double x1, State s) {
        double h = std::min(ctrl_.max_step, x1 - x0);
        double x = x0;
        while (x < x1) {
            if (steps_left_ == 0)
                throw SolverError("step budget exhausted before reaching the "
                                  "right endpoint");
            h = std::min(h, x1 - x);
            if (h < ctrl_.min_step * std::max(1.0, std::fabs(x)))
                throw SolverError("step size underflow at x=" + std::to_string(x));

            State next{};
            double err = try_step(x, s, h, next);
            double grow = err > 0 ? 0.9 * std::pow(err, -0.2) : 5.0;
            if (err <= 1.0) {
                --steps_left_;
                x = (x1 - x - h < 1e-14 * std::max(1.0, std::fabs(x1)))
                        ? x1
                        : x + h;
                s = next;
                guard(x, s);
                sol_.push_node(x, s.y, s.v, s.v);
                h = std::min(ctrl_.max_step, h * std::min(5.0, std::max(0.2, grow)));
            } else {
                h *= std::min(1.0, std::max(0.2, grow));
            }
        }
        return s;
    }

    double rhs_accel(double x, double y) const {
        double rho = p_.measure.rho(x);
        if (rho == 0.0) return 0.0;
        try {
            return -p_.F.eval(x, y) * rho;
        } catch (const EvalError& e) {
            rhs_failure(x, e.what());
        }
    }

    void guard(double x, const State& s) const {
        if (!std::isfinite(s.y) || !std::isfinite(s.v) ||
            std::fabs(s.y) > ctrl_.bound || std::fabs(s.v) > ctrl_.bound)
            throw SolverError("solution exceeded the growth bound near x=" +
                              std::to_string(x));
    }

private:
    // One trial step; returns the scaled error estimate.
    double try_step(double x, const State& s, double h, State& out) const {
        auto f = [this](double t, const State& u) -> State {
            return {u.v, rhs_accel(t, u.y)};
        };
        State k1 = f(x, s);
        State k2 = f(x + C2 * h, {s.y + h * A21 * k1.y, s.v + h * A21 * k1.v});
        State k3 = f(x + C3 * h, {s.y + h * (A31 * k1.y + A32 * k2.y),
                                  s.v + h * (A31 * k1.v + A32 * k2.v)});
        State k4 = f(x + C4 * h,
                     {s.y + h * (A41 * k1.y + A42 * k2.y + A43 * k3.y),
                      s.v + h * (A41 * k1.v + A42 * k2.v + A43 * k3.v)});
        State k5 =
            f(x + C5 * h,
              {s.y + h * (A51 * k1.y + A52 * k2.y + A53 * k3.y + A54 * k4.y),
               s.v + h * (A51 * k1.v + A52 * k2.v + A53 * k3.v + A54 * k4.v)});
        State k6 = f(x + h, {s.y + h * (A61 * k1.y + A62 * k2.y + A63 * k3.y +
                                        A64 * k4.y + A65 * k5.y),
                             s.v + h * (A61 * k1.v + A62 * k2.v + A63 * k3.v +
                                        A64 * k4.v + A65 * k5.v)});
        out.y = s.y + h * (B1 * k1.y + B3 * k3.y + B4 * k4.y + B5 * k5.y +
                           B6 * k6.y);
        out.v = s.v + h * (B1 * k1.v + B3 * k3.v + B4 * k4.v + B5 * k5.v +
                           B6 * k6.v);
        State k7 = f(x + h, out);

        double ey = h * (E1 * k1.y + E3 * k3.y + E4 * k4.y + E5 * k5.y +
                         E6 * k6.y + E7 * k7.y);
        double ev = h * (E1 * k1.v + E3 * k3.v + E4 * k4.v + E5 * k5.v +
                         E6 * k6.v + E7 * k7.v);
        double sy = ctrl_.abs_tol +
                    ctrl_.rel_tol * std::max(std::fabs(s.y), std::fabs(out.y));
        double sv = ctrl_.abs_tol +
                    ctrl_.rel_tol * std::max(std::fabs(s.v), std::fabs(out.v));
        double ry = ey / sy, rv = ev / sv;
        return std::sqrt(0.5 * (ry * ry + rv * rv));
    }

    const Problem& p_;
    const StepControl& ctrl_;
    Solution& sol_;
    std::size_t& steps_left_;
};

}  // namespace

Solution solve_ivp(const Problem& p, double y0, double yp0, double a, double b,
                   const StepControl& ctrl) {
    if (!(a < b) || !std::isfinite(a) || !std::isfinite(b))
        throw SolverError("need a finite range with a < b");
    if (a < p.domain_start())
        throw SolverError("initial point lies below the measure's domain");
    if (!(ctrl.max_step > 0) || !(ctrl.abs_tol > 0 || ctrl.rel_tol > 0))
        throw SolverError("step control must give positive tolerances");

    Solution sol("dopri5+impulses", p.measure.describe());
    sol.push_node(a, y0, yp0, yp0);

    std::size_t steps_left = ctrl.max_steps;
    Stepper stepper(p, ctrl, sol, steps_left);
    State s{y0, yp0};

    std::vector<Atom> atoms = p.measure.atoms_in(a, b);

    // March from event to event; events are atoms plus the endpoint.
    double x = a;
    std::size_t ai = 0;
    while (x < b) {
        double stop = (ai < atoms.size()) ? atoms[ai].loc : b;

        // Split [x, stop] further at density segment edges so each span is
        // either fully covered by one density segment or free of density.
        while (x < stop) {
            double edge = stop;
            for (const DensitySegment& seg : p.measure.density()) {
                if (seg.lo > x && seg.lo < edge) edge = seg.lo;
                if (seg.hi > x && seg.hi < edge) edge = seg.hi;
            }
            if (p.measure.density_overlaps(x, edge)) {
                s = stepper.run(x, edge, s);
            } else {
                // No density mass at all: the exact solution is affine.
                s.y += s.v * (edge - x);
                stepper.guard(edge, s);
                sol.push_node(edge, s.y, s.v, s.v);
            }
            x = edge;
        }

        if (ai < atoms.size()) {
            const Atom& at = atoms[ai++];
            double impulse;
            try {
                impulse = p.F.eval(at.loc, s.y) * at.jump;
            } catch (const EvalError& e) {
                rhs_failure(at.loc, e.what());
            }
            s.v -= impulse;
            stepper.guard(at.loc, s);
            sol.set_last_right_derivative(s.v);
        }
    }
    return sol;
}

std::vector<double> solve_recurrence(const Expr& F, const Expr& b, double y0,
                                     double y1, std::size_t N) {
    std::vector<double> y;
    y.reserve(N + 1);
    y.push_back(y0);
    if (N == 0) return y;
    y.push_back(y1);
    for (std::size_t n = 1; n < N; ++n) {
        double xn = static_cast<double>(n);
        double bn, Fn;
        try {
            bn = b.eval(xn);
            Fn = F.eval(xn, y[n]);
        } catch (const EvalError& e) {
            throw SolverError("sequence step failed at n=" + std::to_string(n) +
                              ": " + e.what());
        }
        double next = 2.0 * y[n] - y[n - 1] - bn * Fn;
        if (!std::isfinite(next))
            throw SolverError("sequence value overflowed at n=" +
                              std::to_string(n + 1));
        y.push_back(next);
    }
    return y;
}

ThreeTermForm three_term_normalize(const Expr& c, const Expr& b, double alpha0,
                                   double alpha1, std::size_t N) {
    if (alpha0 == 0.0 || alpha1 == 0.0)
        throw SolverError("scaling seeds alpha0, alpha1 must be nonzero");

    auto at = [](const Expr& e, std::size_t n) {
        try {
            return e.eval(static_cast<double>(n));
        } catch (const EvalError& err) {
            throw SolverError("coefficient evaluation failed at n=" +
                              std::to_string(n) + ": " + err.what());
        }
    };

    std::vector<double> cs(N + 1), bs(N + 1);
    for (std::size_t n = 0; n <= N; ++n) {
        cs[n] = at(c, n);
        bs[n] = at(b, n);
        if (cs[n] == 0.0)
            throw SolverError("leading coefficient c vanishes at n=" +
                              std::to_string(n));
    }

    ThreeTermForm form;
    form.alpha.assign(N + 1, 0.0);
    form.beta.assign(N + 1, 0.0);
    form.alpha[0] = alpha0;
    if (N >= 1) form.alpha[1] = alpha1;
    for (std::size_t n = 1; n < N; ++n)
        form.alpha[n + 1] = cs[n - 1] / cs[n] * form.alpha[n - 1];
    for (std::size_t n = 1; n <= N; ++n) {
        double denom = cs[n - 1] * form.alpha[n - 1];
        if (denom == 0.0 || !std::isfinite(form.alpha[n]))
            throw SolverError("scaling sequence degenerated at n=" +
                              std::to_string(n));
        form.beta[n] = 2.0 + bs[n] * form.alpha[n] / denom;
    }

    // Back substitution: any solution of the original recurrence, rescaled
    // by alpha, must satisfy the normalized one.
    for (int seed = 0; seed < 2; ++seed) {
        double ya = seed == 0 ? 1.0 : 0.25;
        double yb = seed == 0 ? 0.0 : 1.0;
        std::vector<double> ys{ya, yb};
        for (std::size_t n = 1; n < N; ++n) {
            double next = -(cs[n - 1] * ys[n - 1] + bs[n] * ys[n]) / cs[n];
            ys.push_back(next);
        }
        for (std::size_t n = 1; n + 1 <= N; ++n) {
            double wm = ys[n - 1] / form.alpha[n - 1];
            double w0 = ys[n] / form.alpha[n];
            double wp = ys[n + 1] / form.alpha[n + 1];
            double resid = wp - 2.0 * w0 + wm + form.beta[n] * w0;
            double scale = std::fabs(wp) + 2.0 * std::fabs(w0) +
                           std::fabs(wm) + std::fabs(form.beta[n] * w0) +
                           1e-300;
            if (!std::isfinite(resid) || std::fabs(resid) > 1e-9 * scale)
                throw SolverError(
                    "normalization failed back substitution at n=" +
                    std::to_string(n));
        }
    }
    return form;
}

}  // namespace vst
