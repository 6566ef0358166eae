#pragma once
#include <cstddef>
#include <functional>
#include <stdexcept>

#include "vst/measure.hpp"

namespace vst {

class QuadratureError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Whether to integrate against the measure itself or against its total
// variation (|jump| and |rho|).  Bound-type hypothesis checks use Absolute;
// everything that evaluates the actual operator uses Signed.
enum class Variation { Signed, Absolute };

// Result of an improper integral over [a, infinity).
struct TailResult {
    double value = 0.0;
    bool converged = false;
    double x_reached = 0.0;      // right end of the last window examined
    double tail_estimate = 0.0;  // heuristic bound on what lies beyond
    int segments_used = 0;       // number of doubling windows evaluated
};

struct TailOptions {
    double tol = 1e-12;       // window contribution threshold
    int max_windows = 60;
    double quad_tol = 1e-13;  // per-window quadrature tolerance
    Variation variation = Variation::Signed;
};

// Adaptive Gauss-Kronrod (7-15) integration of f over [a, b].  Bisects
// until the local error estimate is below the local tolerance; throws
// QuadratureError when the interval budget runs out or f is not finite.
double integrate_adaptive(const std::function<double(double)>& f, double a,
                          double b, double tol,
                          std::size_t max_intervals = 4096);

// Integral of g over the interval (a, b] against m: atoms contribute
// g(loc)*jump at positions in (a, b] and the density part is integrated
// adaptively segment by segment.  Variation::Absolute replaces jump and
// rho by their absolute values.
double stieltjes_integral(const std::function<double(double)>& g,
                          const Measure& m, double a, double b, double tol,
                          Variation variation = Variation::Signed,
                          std::size_t max_intervals = 4096);

// Improper integral of g over (a, infinity) against m, computed over the
// doubling windows (a, w], (w, 2w], ... and declared converged once two
// consecutive window contributions are below opts.tol in magnitude and the
// scan has passed m.quiet_after(), so bounded mass sitting beyond an empty
// stretch is never skipped.  The reported tail_estimate is the larger of
// the two final contributions.
TailResult tail_integral(const std::function<double(double)>& g,
                         const Measure& m, double a,
                         const TailOptions& opts = {});

}  // namespace vst
