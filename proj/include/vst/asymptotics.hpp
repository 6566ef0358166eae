#pragma once
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "vst/expr.hpp"
#include "vst/solution.hpp"

namespace vst {

// Tail shapes, checked in this order: an affine fit (Linear, or Constant
// when the slope is negligible), approach to a supplied comparison function,
// a negative convex decreasing branch, persistent oscillation, and finally
// Undetermined when nothing matches cleanly.
enum class AsymptoticKind {
    Linear,
    Constant,
    AsymptoticToF,
    NegativeConvexDecreasing,
    Oscillatory,
    Undetermined,
};

const char* to_string(AsymptoticKind k);

struct AsymptoticClass {
    AsymptoticKind kind = AsymptoticKind::Undetermined;
    double A = 0.0;              // slope of the affine tail model A x + B
    double B = 0.0;              // intercept of the affine tail model
    double residual = 0.0;       // rms misfit; for AsymptoticToF the final
                                 // relative distance to f
    double residual_trend = 0.0; // size of the misfit late in the window
                                 // relative to early in it (< 1: improving)
    int sign_changes = 0;        // counted over the whole solution range
    double window_lo = 0.0;      // tail window actually used
    double window_hi = 0.0;
};

// Classifies the tail of a trajectory from its final window (a fraction of
// the full span, at least 8 nodes).  The affine model is gated on a plain
// {x, 1} least-squares fit; once accepted, a 1/x correction column refines
// A and B (skipped when the window touches zero).  f, when given, enables
// the AsymptoticToF outcome.  Throws SolverError when the trajectory is too
// short to carry a verdict.
AsymptoticClass classify(const Solution& s, const std::optional<Expr>& f = {},
                         double window_fraction = 0.25);

// Sign changes of the node values on [a, b]: one per strict sign flip
// between consecutive nodes plus one per node that is exactly zero.
int count_sign_changes(const Solution& s, double a, double b);

struct EnergyPoint {
    double x = 0.0;
    double energy = 0.0;  // (1/2) y'^2 + int_0^y eta G(x, eta) d eta
    double drive = 0.0;   // y'(x) g(x) when a forcing term g is supplied
};

// Energy along a trajectory whose restoring term factors as y G(x, y).
// Uses the right-hand derivative at each node, so the profile reflects the
// post-impulse state at point masses.
std::vector<EnergyPoint> energy_profile(const Solution& s, const Expr& G,
                                        const std::optional<Expr>& g = {});

// Columns x,energy,drive at full precision.
void write_energy_csv(std::ostream& os, const std::vector<EnergyPoint>& pts);

}  // namespace vst
