#pragma once
#include <string>
#include <utility>
#include <vector>

#include "vst/problem.hpp"
#include "vst/quadrature.hpp"

namespace vst {

class HypothesisError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class Verdict { Holds, Fails, Unknown };

const char* to_string(Verdict v);

// Outcome of one quantitative condition.  `value` and `threshold` give the
// number that was computed and what it was compared against; `tails` keeps
// the underlying improper integrals for inspection.
struct HypothesisReport {
    std::string name;
    Verdict verdict = Verdict::Unknown;
    double value = 0.0;
    double threshold = 0.0;
    std::vector<TailResult> tails;
    std::string notes;
};

// alpha = integral over (x0, inf) of t k(t) against the total variation of
// the measure; the iteration contracts when alpha < 1.
HypothesisReport check_contraction(const Expr& k, const Measure& m, double x0,
                                   const TailOptions& topts = {});

// Convergence of the first moment at a frozen level: integral over
// (x0, inf) of t F(t, M) against the total variation.  M must be positive.
HypothesisReport nehari_check(const Expr& F, const Measure& m, double M,
                              double x0, const TailOptions& topts = {});

// Convergence of integral over (x0, inf) of F(t, M t) against the total
// variation.  M must be positive; levels at or below one are noted.
HypothesisReport linear_growth_check(const Expr& F, const Measure& m, double M,
                                     double x0, const TailOptions& topts = {});

// Smallness of the two weighted tails at a given point:
//   max( int (s-x) |f(s)| k(s) d|sigma|, int (s-x) |F(s,0)| d|sigma| )
// compared against delta/4.  Needs p.f, p.k and p.delta.
HypothesisReport check_smallness_at(const Problem& p, double x,
                                    const TailOptions& topts = {});

// The smallest point (to three significant digits) where the smallness
// condition above holds, searched over [domain start, search_hi].  Throws
// when the inputs are missing or no admissible point exists below the bound.
double find_x0(const Problem& p, double search_hi = 1e6,
               const TailOptions& topts = {});

struct SubSuperOptions {
    double hi = 0.0;          // right end of the check grid; 0 picks a default
    std::size_t nodes = 48;   // grid size
    double slack = 1e-9;      // relative tolerance on the inequalities
    TailOptions tails{};
};

// Checks the two-sided comparison pair on a grid: u must stay below the
// operator applied to v and v above the operator applied to u, where
//   (T w)(x) = f(x) - integral over (x, inf) of (t - x) F(t, w(t)) dsigma.
// u and v are formulas in x with u <= v.  Throws on u > v or on divergent
// tails; inequality failures are reported in the verdict, not thrown.
HypothesisReport verify_subsuper(const Expr& u, const Expr& v, const Problem& p,
                                 double x0, const SubSuperOptions& opts = {});

// Strict growth of y^(-eps) F(x, y) in y, sampled at the given x values and
// ordered positive pairs (y1, y2) with y1 < y2.
HypothesisReport superlinearity_check(
    const Expr& F, double eps, const std::vector<double>& xs,
    const std::vector<std::pair<double, double>>& y_pairs);

// Sampled check of |F(x, u) - F(x, v)| <= k(x) |u - v| over a log-spaced x
// grid in [x0, hi] and a fixed set of level pairs.
HypothesisReport lipschitz_sampled(const Expr& F, const Expr& k, double x0,
                                   double hi, std::size_t nx = 24);

}  // namespace vst
