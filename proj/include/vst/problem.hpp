#pragma once
#include <optional>

#include "vst/expr.hpp"
#include "vst/measure.hpp"

namespace vst {

// One half-axis problem: the nonlinearity F(x, y) together with the carrier
// measure, plus the optional comparison data used by the integral-equation
// solver and the hypothesis checks.
struct Problem {
    Expr F;                       // formula in (x, y)
    Measure measure;
    std::optional<Expr> f;        // forcing / comparison function of x
    std::optional<Expr> k;        // Lipschitz weight of x
    std::optional<double> delta;  // positive floor for |f| on the domain

    double domain_start() const { return measure.domain_start(); }
};

}  // namespace vst
