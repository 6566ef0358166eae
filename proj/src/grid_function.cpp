#include "vst/grid_function.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace vst {

GridFunction::GridFunction(std::vector<double> xs, std::vector<double> ys,
                           std::function<double(double)> extend)
    : xs_(std::move(xs)), ys_(std::move(ys)), extend_(std::move(extend)) {
    if (xs_.size() < 2 || xs_.size() != ys_.size())
        throw std::invalid_argument("grid function needs matching vectors "
                                    "with at least two nodes");
    for (std::size_t i = 1; i < xs_.size(); ++i)
        if (!(xs_[i] > xs_[i - 1]))
            throw std::invalid_argument("grid nodes must increase strictly");

    // Three-point slopes: the derivative of the parabola through each node
    // and its neighbours, one-sided secants at the two ends.
    std::size_t n = xs_.size();
    slopes_.resize(n);
    for (std::size_t i = 1; i + 1 < n; ++i) {
        double hl = xs_[i] - xs_[i - 1], hr = xs_[i + 1] - xs_[i];
        double dl = (ys_[i] - ys_[i - 1]) / hl;
        double dr = (ys_[i + 1] - ys_[i]) / hr;
        slopes_[i] = (hr * dl + hl * dr) / (hl + hr);
    }
    slopes_[0] = (ys_[1] - ys_[0]) / (xs_[1] - xs_[0]);
    if (n > 2) slopes_[0] = 2.0 * slopes_[0] - slopes_[1];
    slopes_[n - 1] = (ys_[n - 1] - ys_[n - 2]) / (xs_[n - 1] - xs_[n - 2]);
    if (n > 2) slopes_[n - 1] = 2.0 * slopes_[n - 1] - slopes_[n - 2];
}

double GridFunction::operator()(double x) const {
    if (x > xs_.back()) {
        if (extend_) return extend_(x);
        return ys_.back();
    }
    if (x < xs_.front()) {
        // Quadrature nodes can land a rounding error below the first node.
        if (xs_.front() - x <= 1e-9 * (1.0 + std::fabs(xs_.front())))
            x = xs_.front();
        else
            throw std::out_of_range("grid function queried at " +
                                    std::to_string(x) + ", below its range");
    }
    auto it = std::upper_bound(xs_.begin(), xs_.end(), x);
    std::size_t i = static_cast<std::size_t>(it - xs_.begin());
    i = (i == xs_.size()) ? i - 2 : i - 1;
    double h = xs_[i + 1] - xs_[i];
    double t = (x - xs_[i]) / h;
    double t2 = t * t, t3 = t2 * t;
    return (2 * t3 - 3 * t2 + 1) * ys_[i] + (t3 - 2 * t2 + t) * h * slopes_[i] +
           (-2 * t3 + 3 * t2) * ys_[i + 1] + (t3 - t2) * h * slopes_[i + 1];
}

}  // namespace vst
