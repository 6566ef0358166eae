#include "vst/measure.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "vst/quadrature.hpp"

namespace vst {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// How far into a rule or segment the constructor looks when sampling for
// validity and sign information.
constexpr long kRuleSampleCount = 256;
constexpr int kDensitySampleCount = 65;

double rule_loc(const AtomRule& r, long n) {
    double x = r.loc.eval(static_cast<double>(n));
    if (!std::isfinite(x))
        throw MeasureError("atom rule produced a non-finite position at n=" +
                           std::to_string(n));
    return x;
}

double rule_jump(const AtomRule& r, long n) {
    double j = r.jump.eval(static_cast<double>(n));
    if (!std::isfinite(j))
        throw MeasureError("atom rule produced a non-finite jump at n=" +
                           std::to_string(n));
    return j;
}

long rule_last(const AtomRule& r) {
    if (!r.count) return std::numeric_limits<long>::max();
    return r.first + *r.count - 1;
}

// Appends rule atoms with a < loc <= b.  Relies on loc being strictly
// increasing in n; enumeration starts at the first index past a, found by
// exponential plus binary search so unbounded rules stay cheap.
void append_rule_atoms(const AtomRule& r, double a, double b,
                       std::vector<Atom>& out) {
    const long last = rule_last(r);
    if (r.count && *r.count <= 0) return;
    long n = r.first;
    if (rule_loc(r, n) <= a) {
        long lo = n;                 // loc(lo) <= a
        long hi = -1;                // smallest known index with loc > a
        long step = 1;
        for (;;) {
            if (lo >= last) return;  // whole rule sits at or below a
            long cand = (last - lo > step) ? lo + step : last;
            if (rule_loc(r, cand) > a) { hi = cand; break; }
            lo = cand;
            if (step > (1L << 48))
                throw MeasureError("atom rule positions do not advance past " +
                                   std::to_string(a));
            step *= 2;
        }
        while (hi - lo > 1) {
            long mid = lo + (hi - lo) / 2;
            if (rule_loc(r, mid) > a) hi = mid; else lo = mid;
        }
        n = hi;
    }
    for (; n <= last; ++n) {
        double x = rule_loc(r, n);
        if (x > b) break;
        out.push_back({x, rule_jump(r, n)});
        if (out.size() > 50'000'000)
            throw MeasureError("atom enumeration exceeded 5e7 entries");
    }
}

}  // namespace

Measure Measure::from_parts(double domain_start, std::vector<Atom> atoms,
                            std::vector<AtomRule> rules,
                            std::vector<DensitySegment> density) {
    if (!std::isfinite(domain_start))
        throw MeasureError("domain start must be finite");

    std::sort(atoms.begin(), atoms.end(),
              [](const Atom& p, const Atom& q) { return p.loc < q.loc; });
    bool nondec = true;
    for (std::size_t i = 0; i < atoms.size(); ++i) {
        const Atom& at = atoms[i];
        if (!std::isfinite(at.loc) || !std::isfinite(at.jump))
            throw MeasureError("atom with non-finite position or jump");
        if (at.loc < domain_start)
            throw MeasureError("atom at " + std::to_string(at.loc) +
                               " lies below the domain start");
        if (i > 0 && atoms[i - 1].loc == at.loc)
            throw MeasureError("duplicate atom position " + std::to_string(at.loc));
        if (at.jump < 0) nondec = false;
    }

    for (const AtomRule& r : rules) {
        if (r.count && *r.count < 0)
            throw MeasureError("atom rule with negative count");
        long last = rule_last(r);
        long probe_end = r.first + kRuleSampleCount;
        if (last < probe_end) probe_end = last;
        double prev = -kInf;
        for (long n = r.first; n <= probe_end; ++n) {
            double x = rule_loc(r, n);
            if (x <= prev)
                throw MeasureError("atom rule positions must increase strictly "
                                   "(violated near n=" + std::to_string(n) + ")");
            if (x < domain_start)
                throw MeasureError("atom rule places an atom below the domain start");
            if (rule_jump(r, n) < 0) nondec = false;
            prev = x;
        }
    }

    std::sort(density.begin(), density.end(),
              [](const DensitySegment& p, const DensitySegment& q) {
                  return p.lo < q.lo;
              });
    for (std::size_t i = 0; i < density.size(); ++i) {
        const DensitySegment& s = density[i];
        if (!std::isfinite(s.lo) || std::isnan(s.hi) || !(s.lo < s.hi))
            throw MeasureError("density segment with empty or invalid range");
        if (i > 0 && density[i - 1].hi > s.lo)
            throw MeasureError("density segments overlap");
        double hi_probe = std::isinf(s.hi) ? s.lo + 64.0 : s.hi;
        // Sample [lo, hi) including the closed left edge, where removable
        // singularities like 1/x on [0, 1) would otherwise hide.
        for (int k = 0; k < kDensitySampleCount; ++k) {
            double x = s.lo + (hi_probe - s.lo) * k / kDensitySampleCount;
            double v;
            try {
                v = s.rho.eval(x);
            } catch (const EvalError& e) {
                throw MeasureError(std::string("density cannot be evaluated "
                                               "inside its segment: ") + e.what());
            }
            if (!std::isfinite(v))
                throw MeasureError("density is not finite inside its segment");
            if (v < 0) nondec = false;
        }
    }

    double quiet = domain_start;
    for (const Atom& at : atoms) quiet = std::max(quiet, at.loc);
    for (const AtomRule& r : rules) {
        if (r.count && *r.count <= 0) continue;
        // Bounded rules end at their last atom; unbounded ones only need to
        // be reached, after which they keep every doubling window occupied.
        long probe = r.count ? rule_last(r) : r.first;
        quiet = std::max(quiet, rule_loc(r, probe));
    }
    for (const DensitySegment& s : density)
        quiet = std::max(quiet, std::isinf(s.hi) ? s.lo : s.hi);

    Measure m;
    m.domain_start_ = domain_start;
    m.quiet_after_ = quiet;
    m.atoms_ = std::move(atoms);
    m.rules_ = std::move(rules);
    m.density_ = std::move(density);
    m.nondecreasing_ = nondec;
    return m;
}

Measure Measure::lebesgue(double domain_start) {
    return from_parts(domain_start, {}, {},
                      {{domain_start, kInf, Expr::parse("1")}});
}

Measure Measure::pure_step(Expr jump, long first, std::optional<long> count,
                           double domain_start) {
    AtomRule r{Expr::parse("n", "n", ""), std::move(jump), first, count};
    return from_parts(domain_start, {}, {std::move(r)}, {});
}

std::vector<Atom> Measure::atoms_in(double a, double b) const {
    std::vector<Atom> out;
    if (!(a < b)) return out;
    for (const Atom& at : atoms_)
        if (at.loc > a && at.loc <= b) out.push_back(at);
    for (const AtomRule& r : rules_) append_rule_atoms(r, a, b, out);
    std::sort(out.begin(), out.end(),
              [](const Atom& p, const Atom& q) { return p.loc < q.loc; });
    // Merge coincident positions so callers see one jump per location.
    std::size_t w = 0;
    for (std::size_t i = 0; i < out.size(); ++i) {
        if (w > 0 && out[w - 1].loc == out[i].loc)
            out[w - 1].jump += out[i].jump;
        else
            out[w++] = out[i];
    }
    out.resize(w);
    return out;
}

bool Measure::density_overlaps(double a, double b) const {
    for (const DensitySegment& s : density_)
        if (s.lo < b && s.hi > a) return true;
    return false;
}

double Measure::rho(double x) const {
    for (const DensitySegment& s : density_)
        if (x >= s.lo && x < s.hi) return s.rho.eval(x);
    return 0.0;
}

double Measure::total_variation(double a, double b) const {
    if (!(a < b)) return 0.0;
    double tv = 0.0;
    for (const Atom& at : atoms_in(a, b)) tv += std::fabs(at.jump);
    for (const DensitySegment& s : density_) {
        double lo = std::max(a, s.lo), hi = std::min(b, s.hi);
        if (!(lo < hi)) continue;
        const Expr& rho = s.rho;
        tv += integrate_adaptive(
            [&rho](double x) { return std::fabs(rho.eval(x)); }, lo, hi, 1e-12);
    }
    return tv;
}

double Measure::sigma(double x) const {
    if (!(x > domain_start_)) return 0.0;
    double s = 0.0;
    for (const Atom& at : atoms_in(domain_start_, x)) s += at.jump;
    for (const DensitySegment& seg : density_) {
        double lo = std::max(domain_start_, seg.lo), hi = std::min(x, seg.hi);
        if (!(lo < hi)) continue;
        const Expr& rho = seg.rho;
        s += integrate_adaptive([&rho](double t) { return rho.eval(t); }, lo,
                                hi, 1e-12);
    }
    return s;
}

std::string Measure::describe() const {
    std::ostringstream os;
    os << "measure on [" << domain_start_ << ", inf)";
    if (!density_.empty()) {
        os << "; density";
        for (const DensitySegment& s : density_) {
            os << " '" << s.rho.source() << "' on [" << s.lo << ", ";
            if (std::isinf(s.hi)) os << "inf"; else os << s.hi;
            os << ")";
        }
    }
    if (!atoms_.empty()) os << "; " << atoms_.size() << " explicit atom(s)";
    for (const AtomRule& r : rules_) {
        os << "; atoms at '" << r.loc.source() << "' weight '"
           << r.jump.source() << "' for n >= " << r.first;
        if (r.count) os << " (" << *r.count << " of them)";
    }
    return os.str();
}

}  // namespace vst
