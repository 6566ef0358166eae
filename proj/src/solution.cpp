#include "vst/solution.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>

namespace vst {

void Solution::push_node(double x, double y, double yp_left, double yp_right) {
    if (!std::isfinite(x) || !std::isfinite(y) || !std::isfinite(yp_left) ||
        !std::isfinite(yp_right))
        throw SolverError("attempted to record a non-finite solution node");
    if (!x_.empty() && !(x > x_.back()))
        throw SolverError("solution nodes must advance strictly");
    x_.push_back(x);
    y_.push_back(y);
    vl_.push_back(yp_left);
    vr_.push_back(yp_right);
}

void Solution::set_last_right_derivative(double yp_right) {
    if (x_.empty()) throw SolverError("no node to adjust");
    if (!std::isfinite(yp_right))
        throw SolverError("derivative jump produced a non-finite value");
    vr_.back() = yp_right;
}

std::size_t Solution::cell_of(double x) const {
    if (x_.size() < 2 || x < x_.front() || x > x_.back())
        throw SolverError("evaluation outside the computed range");
    // Index of the cell [x_i, x_{i+1}] containing x, preferring the cell
    // to the right of a node so derivative queries are right continuous.
    auto it = std::upper_bound(x_.begin(), x_.end(), x);
    std::size_t i = static_cast<std::size_t>(it - x_.begin());
    if (i == x_.size()) return i - 2;
    return i - 1;
}

double Solution::eval(double x) const {
    std::size_t i = cell_of(x);
    double h = x_[i + 1] - x_[i];
    double t = (x - x_[i]) / h;
    double t2 = t * t, t3 = t2 * t;
    return (2 * t3 - 3 * t2 + 1) * y_[i] + (t3 - 2 * t2 + t) * h * vr_[i] +
           (-2 * t3 + 3 * t2) * y_[i + 1] + (t3 - t2) * h * vl_[i + 1];
}

double Solution::eval_yprime(double x) const {
    std::size_t i = cell_of(x);
    if (x == x_[i]) return vr_[i];
    if (x == x_[i + 1]) return vr_[i + 1];
    double h = x_[i + 1] - x_[i];
    double t = (x - x_[i]) / h;
    double t2 = t * t;
    return (6 * t2 - 6 * t) / h * y_[i] + (3 * t2 - 4 * t + 1) * vr_[i] +
           (6 * t - 6 * t2) / h * y_[i + 1] + (3 * t2 - 2 * t) * vl_[i + 1];
}

void write_csv(const Solution& s, std::ostream& os) {
    os << "x,y,yprime\n";
    char line[128];
    for (std::size_t i = 0; i < s.size(); ++i) {
        std::snprintf(line, sizeof line, "%.17g,%.17g,%.17g\n", s.grid()[i],
                      s.values()[i], s.yprime_right()[i]);
        os << line;
    }
}

}  // namespace vst
