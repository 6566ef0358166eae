#pragma once
#include <functional>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "vst/grid_function.hpp"
#include "vst/problem.hpp"
#include "vst/quadrature.hpp"
#include "vst/solution.hpp"

namespace vst {

class FixedPointError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct FixpointOptions {
    std::size_t grid_nodes = 800;
    std::vector<double> extra_nodes;  // forced into the grid, e.g. probe points
    double quad_tol = 1e-12;          // budget for the on-grid moments
    double tail_tol = 1e-13;          // window threshold past the horizon
    int max_windows = 60;
};

// One application of the operator
//   (T u)(x) = f(x) - integral over (x, infinity) of (s - x) F(s, u(s)) dsigma(s)
// tabulated on `grid`.  The integral over (x, horizon] is assembled from
// per-cell moments; the rest is an improper tail computed against u's own
// extension past the last grid node.
struct OperatorImage {
    GridFunction fn;          // T u with an f-proportional extension
    TailResult tail_q;        // tail of F(s, u) past the horizon
    TailResult tail_p;        // tail of s F(s, u) past the horizon
    double tail_bound = 0.0;  // a-priori estimate of the neglected mass
};

OperatorImage apply_T(const std::function<double(double)>& u, const Problem& p,
                      const Expr& f, const std::vector<double>& grid,
                      const FixpointOptions& opts = {});

// Helper shared by apply_T callers: a grid on [x0, horizon] graded toward
// x0 (logarithmic beyond unit distance), containing every atom in range and
// all requested extra nodes.
std::vector<double> fixpoint_grid(const Measure& m, double x0, double horizon,
                                  const FixpointOptions& opts);

// Initial iterate: a constant, the comparison function f itself, or any
// formula in x.
struct StartFromF {};
using StartSpec = std::variant<double, StartFromF, Expr>;

struct IterationReport {
    int iterations = 0;
    std::vector<double> sup_deltas;  // one weighted sup per iteration
    std::optional<double> contraction_ratio;  // geometric mean, >= 3 iters
    bool converged = false;
    bool diverging = false;  // three consecutive growing deltas
    double horizon = 0.0;
    double tail_bound = 0.0;
    bool weighted = false;   // sup norm weighted by 1/|f|
    std::string notes;
};

// Successive application of T from the given start until the (optionally
// 1/|f|-weighted) sup distance between iterates drops below tol.  Requires
// p.f.  The returned Solution carries the final iterate on the grid with
// interpolant slopes in the derivative column.
std::pair<Solution, IterationReport> picard_solve(
    const Problem& p, const StartSpec& start, double x0, double horizon,
    double tol, int max_iter, const FixpointOptions& opts = {});

}  // namespace vst
