#pragma once
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "vst/expr.hpp"

namespace vst {

class MeasureError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// A single point mass: the integrator weights g(loc) by `jump`, which is
// the increment of the underlying right-continuous integrator function at
// `loc`.  Jumps may be negative.
struct Atom {
    double loc;
    double jump;
};

// Generates a (possibly unbounded) family of atoms: for n = first,
// first+1, ... place weight jump(n) at position loc(n).  loc must be
// strictly increasing in n so that ranges of atoms can be enumerated.
struct AtomRule {
    Expr loc;    // formula in n
    Expr jump;   // formula in n
    long first = 0;
    std::optional<long> count;  // nullopt means unbounded
};

// Absolutely continuous piece: density `rho` on [lo, hi); hi may be
// +infinity.  Outside every segment the density is zero.
struct DensitySegment {
    double lo;
    double hi;
    Expr rho;  // formula in x
};

// An integrator of locally bounded variation on [domain_start, infinity),
// represented as point masses plus a piecewise density.  Immutable once
// built; cheap to copy.
class Measure {
public:
    static Measure from_parts(double domain_start, std::vector<Atom> atoms,
                              std::vector<AtomRule> rules,
                              std::vector<DensitySegment> density);

    // sigma(t) = t from `domain_start` on: density one, no atoms.
    static Measure lebesgue(double domain_start);

    // Atoms of weight jump(n) at the integers n = first, first+1, ...;
    // no density.  This is the carrier for difference equations.
    static Measure pure_step(Expr jump, long first,
                             std::optional<long> count = std::nullopt,
                             double domain_start = 0.0);

    double domain_start() const { return domain_start_; }

    // A point past which all remaining mass comes from unbounded sources
    // (atom rules without a count, density segments reaching +infinity).
    // Improper-integral scans must look at least this far before deciding
    // that the tail has gone quiet.
    double quiet_after() const { return quiet_after_; }

    // True when every inspected jump and density sample is >= 0.  Sampling
    // based for rule and density formulas, so a best-effort report.
    bool nondecreasing() const { return nondecreasing_; }

    // All atoms with a < loc <= b in increasing position order.  Atoms from
    // different sources that share a position are merged (jumps added).
    std::vector<Atom> atoms_in(double a, double b) const;

    const std::vector<DensitySegment>& density() const { return density_; }
    bool has_density() const { return !density_.empty(); }
    bool density_overlaps(double a, double b) const;

    // Density value at x; zero outside every segment.
    double rho(double x) const;

    // Total variation of the interval (a, b]: sum of |jump| plus the
    // integral of |rho|, evaluated to a fixed internal tolerance.
    double total_variation(double a, double b) const;

    // Cumulative value sigma(x) - sigma(domain_start) over (domain_start, x].
    double sigma(double x) const;

    std::string describe() const;

private:
    Measure() = default;

    double domain_start_ = 0.0;
    double quiet_after_ = 0.0;
    bool nondecreasing_ = true;
    std::vector<Atom> atoms_;
    std::vector<AtomRule> rules_;
    std::vector<DensitySegment> density_;
};

}  // namespace vst
