#include "vst/hypotheses.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace vst {
namespace {

std::string format_num(double v) {
    std::ostringstream os;
    os.precision(6);
    os << v;
    return os.str();
}

TailOptions absolute(TailOptions topts) {
    topts.variation = Variation::Absolute;
    return topts;
}

// Shared wording for convergence-type checks.  A tail that ran out of
// windows while its contributions were still well above the threshold is
// treated as divergent; one that was still decaying stays Unknown.
void grade_convergence(HypothesisReport& rep, const TailResult& tail,
                       double tol) {
    if (tail.converged) {
        rep.verdict = Verdict::Holds;
        return;
    }
    if (tail.tail_estimate > 1e3 * tol) {
        rep.verdict = Verdict::Fails;
        rep.notes += " window contributions were still " +
                     format_num(tail.tail_estimate) + " at x = " +
                     format_num(tail.x_reached) + "; treated as divergent.";
    } else {
        rep.verdict = Verdict::Unknown;
        rep.notes += " not settled by x = " + format_num(tail.x_reached) +
                     " (last contribution " + format_num(tail.tail_estimate) +
                     ").";
    }
}

}  // namespace

const char* to_string(Verdict v) {
    switch (v) {
        case Verdict::Holds: return "holds";
        case Verdict::Fails: return "fails";
        case Verdict::Unknown: return "unknown";
    }
    return "unknown";
}

HypothesisReport check_contraction(const Expr& k, const Measure& m, double x0,
                                   const TailOptions& topts) {
    HypothesisReport rep;
    rep.name = "contraction";
    rep.threshold = 1.0;
    rep.notes = "integral of t k(t) over (x0, inf) against the total variation;";
    TailResult tail;
    try {
        tail = tail_integral([&](double t) { return t * k.eval(t); }, m, x0,
                             absolute(topts));
    } catch (const EvalError& e) {
        rep.notes += std::string(" integrand evaluation failed: ") + e.what();
        return rep;
    }
    rep.tails.push_back(tail);
    rep.value = tail.value;
    if (tail.converged) {
        rep.verdict = rep.value < rep.threshold ? Verdict::Holds : Verdict::Fails;
    } else if (rep.value >= rep.threshold) {
        rep.verdict = Verdict::Fails;
        rep.notes += " partial integral already reaches the bound.";
    } else {
        rep.verdict = Verdict::Unknown;
        rep.notes += " tail did not settle below x = " +
                     format_num(tail.x_reached) + ".";
    }
    return rep;
}

HypothesisReport nehari_check(const Expr& F, const Measure& m, double M,
                              double x0, const TailOptions& topts) {
    if (!(M > 0)) throw HypothesisError("nehari_check needs M > 0");
    HypothesisReport rep;
    rep.name = "frozen-level first moment";
    rep.threshold = std::numeric_limits<double>::infinity();
    rep.notes = "convergence of the integral of t F(t, M) against the total "
                "variation, M = " + format_num(M) + ";";
    TailResult tail;
    try {
        tail = tail_integral([&](double t) { return t * F.eval(t, M); }, m, x0,
                             absolute(topts));
    } catch (const EvalError& e) {
        rep.notes += std::string(" integrand evaluation failed: ") + e.what();
        return rep;
    }
    rep.tails.push_back(tail);
    rep.value = tail.value;
    grade_convergence(rep, tail, topts.tol);
    return rep;
}

HypothesisReport linear_growth_check(const Expr& F, const Measure& m, double M,
                                     double x0, const TailOptions& topts) {
    if (!(M > 0)) throw HypothesisError("linear_growth_check needs M > 0");
    HypothesisReport rep;
    rep.name = "linear-level convergence";
    rep.threshold = std::numeric_limits<double>::infinity();
    rep.notes = "convergence of the integral of F(t, M t) against the total "
                "variation, M = " + format_num(M) + ";";
    if (M <= 1.0) rep.notes += " note: comparison level M is at or below 1;";
    TailResult tail;
    try {
        tail = tail_integral([&](double t) { return F.eval(t, M * t); }, m, x0,
                             absolute(topts));
    } catch (const EvalError& e) {
        rep.notes += std::string(" integrand evaluation failed: ") + e.what();
        return rep;
    }
    rep.tails.push_back(tail);
    rep.value = tail.value;
    grade_convergence(rep, tail, topts.tol);
    return rep;
}

HypothesisReport check_smallness_at(const Problem& p, double x,
                                    const TailOptions& topts) {
    if (!p.f || !p.k || !p.delta)
        throw HypothesisError("smallness check needs f, k and delta");
    if (!(*p.delta > 0)) throw HypothesisError("delta must be positive");
    HypothesisReport rep;
    rep.name = "smallness at x = " + format_num(x);
    rep.threshold = *p.delta / 4.0;
    rep.notes = "max of the weighted forcing tail and the zero-level tail, "
                "both against the total variation;";
    const Expr& f = *p.f;
    const Expr& k = *p.k;
    TailResult forcing, zero_level;
    try {
        forcing = tail_integral(
            [&, x](double s) { return (s - x) * std::fabs(f.eval(s)) * k.eval(s); },
            p.measure, x, absolute(topts));
        zero_level = tail_integral(
            [&, x](double s) { return (s - x) * std::fabs(p.F.eval(s, 0.0)); },
            p.measure, x, absolute(topts));
    } catch (const EvalError& e) {
        rep.notes += std::string(" integrand evaluation failed: ") + e.what();
        return rep;
    }
    rep.tails.push_back(forcing);
    rep.tails.push_back(zero_level);
    rep.value = std::max(forcing.value, zero_level.value);
    if (forcing.converged && zero_level.converged) {
        rep.verdict = rep.value <= rep.threshold ? Verdict::Holds : Verdict::Fails;
    } else if (rep.value > rep.threshold) {
        rep.verdict = Verdict::Fails;
        rep.notes += " partial integral already exceeds delta/4.";
    } else {
        rep.verdict = Verdict::Unknown;
        rep.notes += " tails did not settle.";
    }
    return rep;
}

double find_x0(const Problem& p, double search_hi, const TailOptions& topts) {
    const double start = p.domain_start();
    if (!(search_hi > start))
        throw HypothesisError("find_x0: search bound must exceed the domain start");
    auto admissible = [&](double x) {
        return check_smallness_at(p, x, topts).verdict == Verdict::Holds;
    };
    if (admissible(start)) return start;

    // Bracket: double upwards (from a positive base) until the condition holds.
    double lo = start;
    double hi = std::max({1.0, 2.0 * start, start + 1.0});
    while (!admissible(hi)) {
        lo = hi;
        hi *= 2.0;
        if (hi > search_hi)
            throw HypothesisError("find_x0: no admissible point below " +
                                  format_num(search_hi));
    }

    // Shrink to three significant digits; geometric midpoints keep the
    // resolution relative.  lo always fails, hi always holds.
    while (hi - lo > 5e-4 * std::fabs(hi)) {
        double mid = lo > 0 ? std::sqrt(lo * hi) : 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        if (admissible(mid))
            hi = mid;
        else
            lo = mid;
    }
    return hi;
}

HypothesisReport verify_subsuper(const Expr& u, const Expr& v, const Problem& p,
                                 double x0, const SubSuperOptions& opts) {
    if (!p.f) throw HypothesisError("verify_subsuper needs the forcing term f");
    if (opts.nodes < 2) throw HypothesisError("verify_subsuper needs >= 2 nodes");
    HypothesisReport rep;
    rep.name = "sub/super pair";
    rep.notes = "operator tails integrated against the signed measure;";
    const double hi = opts.hi > x0 ? opts.hi : std::max(x0 + 10.0, 100.0 * std::max(x0, 1.0));

    // Log-spaced grid on [x0, hi].
    std::vector<double> grid(opts.nodes);
    const double span = std::log1p(hi - x0);
    for (std::size_t i = 0; i < opts.nodes; ++i) {
        double t = static_cast<double>(i) / static_cast<double>(opts.nodes - 1);
        grid[i] = x0 + std::expm1(span * t);
    }
    grid.front() = x0;
    grid.back() = hi;

    TailOptions topts = opts.tails;
    topts.variation = Variation::Signed;
    double worst = std::numeric_limits<double>::infinity();
    for (double x : grid) {
        const double ux = u.eval(x);
        const double vx = v.eval(x);
        if (ux > vx)
            throw HypothesisError("verify_subsuper: u exceeds v at x = " +
                                  format_num(x));
        const double fx = p.f->eval(x);
        auto image_of = [&](const Expr& w) {
            TailResult tail = tail_integral(
                [&, x](double t) { return (t - x) * p.F.eval(t, w.eval(t)); },
                p.measure, x, topts);
            if (!tail.converged)
                throw HypothesisError(
                    "verify_subsuper: operator tail did not converge at x = " +
                    format_num(x));
            rep.tails.push_back(tail);
            return fx - tail.value;
        };
        const double scale = opts.slack * (1.0 + std::fabs(fx));
        // u <= T v and T u <= v, tracked as the worst signed margin.
        worst = std::min(worst, image_of(v) - ux);
        worst = std::min(worst, vx - image_of(u));
        if (worst < -scale) {
            rep.notes += " inequality violated at x = " + format_num(x) + ".";
            rep.value = worst;
            rep.verdict = Verdict::Fails;
            return rep;
        }
    }
    rep.value = worst;
    rep.threshold = 0.0;
    rep.verdict = Verdict::Holds;
    return rep;
}

HypothesisReport superlinearity_check(
    const Expr& F, double eps, const std::vector<double>& xs,
    const std::vector<std::pair<double, double>>& y_pairs) {
    if (!(eps > 0)) throw HypothesisError("superlinearity_check needs eps > 0");
    if (xs.empty() || y_pairs.empty())
        throw HypothesisError("superlinearity_check needs sample points");
    HypothesisReport rep;
    rep.name = "superlinear growth";
    rep.threshold = 0.0;
    rep.notes = "strict increase of y^(-eps) F(x, y) over the sampled pairs;";
    double worst = std::numeric_limits<double>::infinity();
    for (const auto& [y1, y2] : y_pairs) {
        if (!(0 < y1 && y1 < y2))
            throw HypothesisError("superlinearity_check: pairs must satisfy 0 < y1 < y2");
        for (double x : xs) {
            double g1, g2;
            try {
                g1 = std::pow(y1, -eps) * F.eval(x, y1);
                g2 = std::pow(y2, -eps) * F.eval(x, y2);
            } catch (const EvalError& e) {
                rep.notes += std::string(" evaluation failed: ") + e.what();
                rep.verdict = Verdict::Unknown;
                return rep;
            }
            worst = std::min(worst, g2 - g1);
            if (worst <= 0) {
                rep.value = worst;
                rep.verdict = Verdict::Fails;
                rep.notes += " not strictly increasing at x = " + format_num(x) +
                             ", pair (" + format_num(y1) + ", " + format_num(y2) +
                             ").";
                return rep;
            }
        }
    }
    rep.value = worst;
    rep.verdict = Verdict::Holds;
    return rep;
}

HypothesisReport lipschitz_sampled(const Expr& F, const Expr& k, double x0,
                                   double hi, std::size_t nx) {
    if (!(hi > x0) || nx < 2)
        throw HypothesisError("lipschitz_sampled needs hi > x0 and nx >= 2");
    HypothesisReport rep;
    rep.name = "sampled Lipschitz envelope";
    rep.threshold = 0.0;
    rep.notes = "|F(x,u) - F(x,v)| <= k(x) |u - v| over a log grid and fixed "
                "level pairs;";
    static const double levels[] = {-2.5, -1.0, -0.3, 0.0, 0.4, 1.0, 2.0, 3.5};
    const double span = std::log1p(hi - x0);
    double worst = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < nx; ++i) {
        double t = static_cast<double>(i) / static_cast<double>(nx - 1);
        double x = x0 + std::expm1(span * t);
        double kx;
        try {
            kx = k.eval(x);
        } catch (const EvalError& e) {
            rep.notes += std::string(" weight evaluation failed: ") + e.what();
            rep.verdict = Verdict::Unknown;
            return rep;
        }
        if (kx < 0) {
            rep.verdict = Verdict::Fails;
            rep.notes += " weight is negative at x = " + format_num(x) + ".";
            rep.value = kx;
            return rep;
        }
        for (double uu : levels) {
            for (double vv : levels) {
                if (uu >= vv) continue;
                double lhs;
                try {
                    lhs = std::fabs(F.eval(x, uu) - F.eval(x, vv));
                } catch (const EvalError& e) {
                    rep.notes += std::string(" evaluation failed: ") + e.what();
                    rep.verdict = Verdict::Unknown;
                    return rep;
                }
                const double rhs = kx * (vv - uu);
                const double margin = rhs - lhs + 1e-12 * (1.0 + rhs);
                worst = std::min(worst, margin);
                if (margin < 0) {
                    rep.value = worst;
                    rep.verdict = Verdict::Fails;
                    rep.notes += " envelope violated at x = " + format_num(x) +
                                 ", levels (" + format_num(uu) + ", " +
                                 format_num(vv) + ").";
                    return rep;
                }
            }
        }
    }
    rep.value = worst;
    rep.verdict = Verdict::Holds;
    return rep;
}

}  // namespace vst
