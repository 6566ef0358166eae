#include "vst/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>
#include <vector>

namespace vst {

namespace {

// 15-point Kronrod extension of 7-point Gauss (positive abscissae; the
// even indices are the Kronrod-only nodes, the odd ones carry the
// embedded Gauss rule).
constexpr std::array<double, 8> kXK = {
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
};
constexpr std::array<double, 8> kWK = {
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
};
constexpr std::array<double, 4> kWG = {
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
};

struct RuleResult {
    double kronrod;
    double err;
};

RuleResult gk15(const std::function<double(double)>& f, double lo, double hi) {
    const double mid = 0.5 * (lo + hi);
    const double h = 0.5 * (hi - lo);
    double fv[15];
    for (int i = 0; i < 7; ++i) {
        fv[i] = f(mid - h * kXK[i]);
        fv[14 - i] = f(mid + h * kXK[i]);
    }
    fv[7] = f(mid);
    double k = kWK[7] * fv[7];
    double g = kWG[3] * fv[7];
    for (int i = 0; i < 7; ++i) {
        double pair = fv[i] + fv[14 - i];
        k += kWK[i] * pair;
        if (i % 2 == 1) g += kWG[i / 2] * pair;
    }
    k *= h;
    g *= h;
    if (!std::isfinite(k))
        throw QuadratureError("integrand not finite on [" + std::to_string(lo) +
                              ", " + std::to_string(hi) + "]");
    return {k, std::fabs(k - g)};
}

double adapt(const std::function<double(double)>& f, double lo, double hi,
             double tol, std::size_t& budget) {
    RuleResult r = gk15(f, lo, hi);
    // Relative stopping floor: once the split error sits at roundoff level
    // there is nothing left to gain from bisecting further.
    if (r.err <= std::max(tol, 5e-16 * std::fabs(r.kronrod))) return r.kronrod;
    if (budget == 0)
        throw QuadratureError("quadrature tolerance not achieved within the "
                              "interval budget");
    --budget;
    double mid = 0.5 * (lo + hi);
    if (!(lo < mid && mid < hi))
        throw QuadratureError("quadrature interval too small to split further");
    return adapt(f, lo, mid, 0.5 * tol, budget) +
           adapt(f, mid, hi, 0.5 * tol, budget);
}

}  // namespace

double integrate_adaptive(const std::function<double(double)>& f, double a,
                          double b, double tol, std::size_t max_intervals) {
    if (a == b) return 0.0;
    if (!(a < b)) throw QuadratureError("reversed integration interval");
    if (!std::isfinite(a) || !std::isfinite(b))
        throw QuadratureError("integration endpoints must be finite");
    std::size_t budget = max_intervals;
    return adapt(f, a, b, std::max(tol, 0.0), budget);
}

double stieltjes_integral(const std::function<double(double)>& g,
                          const Measure& m, double a, double b, double tol,
                          Variation variation, std::size_t max_intervals) {
    if (a == b) return 0.0;
    if (!(a < b)) throw QuadratureError("reversed integration interval");

    double sum = 0.0;
    for (const Atom& at : m.atoms_in(a, b)) {
        double v = g(at.loc);
        if (!std::isfinite(v))
            throw QuadratureError("integrand not finite at atom position " +
                                  std::to_string(at.loc));
        sum += v * (variation == Variation::Absolute ? std::fabs(at.jump)
                                                     : at.jump);
    }

    // Clip density segments to (a, b) and spread the tolerance over them.
    std::vector<std::pair<double, const DensitySegment*>> pieces;
    for (const DensitySegment& s : m.density()) {
        double lo = std::max(a, s.lo), hi = std::min(b, s.hi);
        if (lo < hi) pieces.emplace_back(lo, &s);
    }
    if (pieces.empty()) return sum;
    double piece_tol = tol / static_cast<double>(pieces.size());
    for (auto& [lo, seg] : pieces) {
        double hi = std::min(b, seg->hi);
        const Expr& rho = seg->rho;
        bool absolute = variation == Variation::Absolute;
        sum += integrate_adaptive(
            [&g, &rho, absolute](double x) {
                double w = rho.eval(x);
                return g(x) * (absolute ? std::fabs(w) : w);
            },
            lo, hi, piece_tol, max_intervals);
    }
    return sum;
}

TailResult tail_integral(const std::function<double(double)>& g,
                         const Measure& m, double a, const TailOptions& opts) {
    TailResult res;
    res.x_reached = a;

    double prev_contrib = std::numeric_limits<double>::infinity();
    double lo = a;
    double end = std::max(2.0 * a, a + 1.0);
    for (int j = 0; j < opts.max_windows; ++j) {
        double c = stieltjes_integral(g, m, lo, end, opts.quad_tol,
                                      opts.variation);
        res.value += c;
        res.x_reached = end;
        res.segments_used = j + 1;
        if (!std::isfinite(res.value))
            throw QuadratureError("improper integral overflowed");
        double mag = std::fabs(c);
        res.tail_estimate = (j == 0) ? mag : std::max(prev_contrib, mag);
        // Quiet windows only count once every bounded mass source is behind
        // us; otherwise an isolated far-out atom would be skipped.
        if (j > 0 && mag <= opts.tol && prev_contrib <= opts.tol &&
            end >= m.quiet_after()) {
            res.converged = true;
            return res;
        }
        prev_contrib = mag;
        lo = end;
        end *= 2.0;
    }
    res.converged = false;
    return res;
}

}  // namespace vst
