#include "vst/fixedpoint.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace vst {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::function<double(double)> start_callable(const StartSpec& start,
                                             const Expr& f) {
    if (std::holds_alternative<double>(start)) {
        double a = std::get<double>(start);
        return [a](double) { return a; };
    }
    if (std::holds_alternative<StartFromF>(start))
        return [f](double s) { return f.eval(s); };
    Expr e = std::get<Expr>(start);
    return [e](double s) { return e.eval(s); };
}

// A-priori estimate of the operator mass past the horizon; see the note on
// OperatorImage::tail_bound.  Uses the Lipschitz envelope k|f| when both are
// available, otherwise freezes the second argument at the sup of |u|.
double estimate_tail_bound(const std::function<double(double)>& u,
                           const Problem& p, const Expr& f, double horizon,
                           double sup_abs_u, double sup_ratio,
                           const TailOptions& topts) {
    TailOptions abs_opts = topts;
    abs_opts.variation = Variation::Absolute;
    const Expr& F = p.F;
    if (p.k && p.delta) {
        const Expr& k = *p.k;
        auto grow = [&](double s) {
            return s * std::fabs(k.eval(s) * f.eval(s));
        };
        auto at_zero = [&](double s) { return s * std::fabs(F.eval(s, 0.0)); };
        TailResult b1 = tail_integral(grow, p.measure, horizon, abs_opts);
        TailResult b0 = tail_integral(at_zero, p.measure, horizon, abs_opts);
        if (!b1.converged || !b0.converged) return kInf;
        return sup_ratio * b1.value + b0.value;
    }
    (void)u;
    auto frozen = [&](double s) { return s * std::fabs(F.eval(s, sup_abs_u)); };
    TailResult b = tail_integral(frozen, p.measure, horizon, abs_opts);
    return b.converged ? b.value : kInf;
}

}  // namespace

std::vector<double> fixpoint_grid(const Measure& m, double x0, double horizon,
                                  const FixpointOptions& opts) {
    if (!(horizon > x0))
        throw FixedPointError("horizon must lie beyond the left endpoint");
    if (opts.grid_nodes < 8)
        throw FixedPointError("grid needs at least eight nodes");

    std::vector<double> g;
    g.reserve(opts.grid_nodes + opts.extra_nodes.size() + 16);
    // Graded spacing: uniform in log(1 + (x - x0)), so roughly uniform near
    // x0 and logarithmic far out.
    double span = std::log1p(horizon - x0);
    for (std::size_t i = 0; i < opts.grid_nodes; ++i) {
        double u = span * static_cast<double>(i) /
                   static_cast<double>(opts.grid_nodes - 1);
        g.push_back(x0 + std::expm1(u));
    }
    g.back() = horizon;
    for (const Atom& at : m.atoms_in(x0, horizon)) g.push_back(at.loc);
    for (double x : opts.extra_nodes)
        if (x >= x0 && x <= horizon) g.push_back(x);
    std::sort(g.begin(), g.end());
    // Drop near-coincident nodes; keep the exact atom/extra positions by
    // preferring the later entry of a coincident pair.
    std::vector<double> out;
    out.reserve(g.size());
    for (double x : g) {
        if (!out.empty() && x - out.back() <= 1e-12 * (1.0 + std::fabs(x)))
            out.back() = x;
        else
            out.push_back(x);
    }
    out.front() = x0;
    return out;
}

OperatorImage apply_T(const std::function<double(double)>& u, const Problem& p,
                      const Expr& f, const std::vector<double>& grid,
                      const FixpointOptions& opts) {
    if (grid.size() < 2) throw FixedPointError("grid needs at least two nodes");
    const double x0 = grid.front(), horizon = grid.back();
    const Expr& F = p.F;

    auto integrand = [&](double s) { return F.eval(s, u(s)); };
    auto weighted = [&](double s) { return s * F.eval(s, u(s)); };

    const std::size_t cells = grid.size() - 1;
    std::vector<double> q(cells), pm(cells);
    const double width = horizon - x0;
    for (std::size_t i = 0; i < cells; ++i) {
        double cell_tol = opts.quad_tol * (grid[i + 1] - grid[i]) / width;
        q[i] = stieltjes_integral(integrand, p.measure, grid[i], grid[i + 1],
                                  cell_tol);
        pm[i] = stieltjes_integral(weighted, p.measure, grid[i], grid[i + 1],
                                   cell_tol);
    }

    TailOptions topts;
    topts.tol = opts.tail_tol;
    topts.max_windows = opts.max_windows;
    topts.quad_tol = 0.1 * opts.tail_tol;
    OperatorImage img{GridFunction({0, 1}, {0, 0}), {}, {}, 0.0};
    img.tail_q = tail_integral(integrand, p.measure, horizon, topts);
    img.tail_p = tail_integral(weighted, p.measure, horizon, topts);
    if (!img.tail_q.converged || !img.tail_p.converged)
        throw FixedPointError(
            "the improper integral past the horizon did not settle; raise the "
            "horizon or check that the tail is integrable");

    // Suffix sums give both moments at every node in one sweep.
    std::vector<double> vals(grid.size());
    double Q = img.tail_q.value, P = img.tail_p.value;
    double sup_abs_u = 0.0, sup_ratio = 0.0;
    for (std::size_t i = grid.size(); i-- > 0;) {
        if (i < grid.size() - 1) {
            Q += q[i];
            P += pm[i];
        }
        double tu = f.eval(grid[i]) - (P - grid[i] * Q);
        if (!std::isfinite(tu))
            throw FixedPointError("operator image is not finite at x=" +
                                  std::to_string(grid[i]));
        vals[i] = tu;
        double ui = u(grid[i]);
        sup_abs_u = std::max(sup_abs_u, std::fabs(ui));
        double fi = f.eval(grid[i]);
        if (fi != 0.0)
            sup_ratio = std::max(sup_ratio, std::fabs(ui / fi));
    }

    img.tail_bound = estimate_tail_bound(u, p, f, horizon, sup_abs_u,
                                         sup_ratio, topts);

    // Continue the image past the horizon proportionally to f, matching at
    // the last node; fall back to a constant when f is negligible there.
    double f_h = f.eval(horizon);
    double g_h = vals.back();
    std::function<double(double)> ext;
    if (std::fabs(f_h) > 1e-12 * (1.0 + std::fabs(g_h))) {
        double ratio = g_h / f_h;
        ext = [f, ratio](double s) { return f.eval(s) * ratio; };
    } else {
        ext = [g_h](double) { return g_h; };
    }
    img.fn = GridFunction(grid, std::move(vals), std::move(ext));
    return img;
}

std::pair<Solution, IterationReport> picard_solve(const Problem& p,
                                                  const StartSpec& start,
                                                  double x0, double horizon,
                                                  double tol, int max_iter,
                                                  const FixpointOptions& opts) {
    if (!p.f)
        throw FixedPointError("the iteration needs the comparison function f");
    if (max_iter < 1) throw FixedPointError("max_iter must be at least 1");
    if (!(tol > 0)) throw FixedPointError("tolerance must be positive");
    if (x0 < p.domain_start())
        throw FixedPointError("x0 lies below the measure's domain");
    const Expr& f = *p.f;

    std::vector<double> grid = fixpoint_grid(p.measure, x0, horizon, opts);

    IterationReport rep;
    rep.horizon = horizon;
    rep.weighted = p.delta.has_value() && *p.delta > 0;

    std::vector<double> weight(grid.size(), 1.0);
    if (rep.weighted) {
        for (std::size_t i = 0; i < grid.size(); ++i) {
            double fi = std::fabs(f.eval(grid[i]));
            if (fi < *p.delta * (1.0 - 1e-12))
                throw FixedPointError(
                    "weighted norm requested but |f| drops below delta at x=" +
                    std::to_string(grid[i]));
            weight[i] = 1.0 / fi;
        }
    }

    std::function<double(double)> cur = start_callable(start, f);
    std::vector<double> cur_vals(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) cur_vals[i] = cur(grid[i]);

    std::optional<GridFunction> latest;
    for (int iter = 1; iter <= max_iter; ++iter) {
        OperatorImage img = apply_T(cur, p, f, grid, opts);
        double sup = 0.0;
        for (std::size_t i = 0; i < grid.size(); ++i)
            sup = std::max(sup,
                           weight[i] * std::fabs(img.fn.values()[i] - cur_vals[i]));
        rep.iterations = iter;
        rep.sup_deltas.push_back(sup);
        rep.tail_bound = img.tail_bound;
        cur_vals = img.fn.values();
        latest = img.fn;
        cur = [g = *latest](double s) { return g(s); };

        if (sup <= tol) {
            rep.converged = true;
            break;
        }
        std::size_t m = rep.sup_deltas.size();
        if (m >= 4 && rep.sup_deltas[m - 1] > rep.sup_deltas[m - 2] &&
            rep.sup_deltas[m - 2] > rep.sup_deltas[m - 3] &&
            rep.sup_deltas[m - 3] > rep.sup_deltas[m - 4]) {
            rep.diverging = true;
            rep.notes = "sup distances grew over three consecutive iterations";
            break;
        }
    }
    if (!rep.converged && !rep.diverging)
        rep.notes = "iteration budget exhausted before reaching the tolerance";

    if (rep.iterations >= 3) {
        double d0 = rep.sup_deltas.front(), dm = rep.sup_deltas.back();
        if (d0 > 0 && dm > 0)
            rep.contraction_ratio =
                std::pow(dm / d0,
                         1.0 / static_cast<double>(rep.iterations - 1));
    }

    Solution sol("picard", p.measure.describe());
    for (std::size_t i = 0; i < grid.size(); ++i) {
        double slope = latest->node_slope(i);
        sol.push_node(grid[i], cur_vals[i], slope, slope);
    }
    return {std::move(sol), std::move(rep)};
}

}  // namespace vst
