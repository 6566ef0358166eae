#pragma once
#include <functional>
#include <vector>

namespace vst {

// Scalar function tabulated on a strictly increasing grid.  Inside the grid
// it is reconstructed by a cubic Hermite patch with three-point slopes; past
// the right end it delegates to an extension callable (constant continuation
// by default).  Queries below the first node are rejected apart from a tiny
// roundoff allowance.
class GridFunction {
public:
    GridFunction(std::vector<double> xs, std::vector<double> ys,
                 std::function<double(double)> extend = {});

    double operator()(double x) const;

    const std::vector<double>& grid() const { return xs_; }
    const std::vector<double>& values() const { return ys_; }
    // Slope of the interpolant at node i.
    double node_slope(std::size_t i) const { return slopes_[i]; }
    double x_front() const { return xs_.front(); }
    double x_back() const { return xs_.back(); }

private:
    std::vector<double> xs_, ys_, slopes_;
    std::function<double(double)> extend_;
};

}  // namespace vst
