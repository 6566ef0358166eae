#pragma once
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

namespace vst {

class SolverError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// A trajectory sampled on a strictly increasing grid.  y is continuous;
// the derivative may jump downward at point masses, so each node carries
// both one-sided limits.  Between nodes the trajectory is reconstructed
// with a cubic Hermite patch, which degenerates to the exact straight
// line on stretches where both endpoint slopes agree.
class Solution {
public:
    Solution(std::string method, std::string measure_desc)
        : method_(std::move(method)), measure_desc_(std::move(measure_desc)) {}

    void push_node(double x, double y, double yp_left, double yp_right);
    // Replace the right derivative of the newest node (impulse at an atom).
    void set_last_right_derivative(double yp_right);

    std::size_t size() const { return x_.size(); }
    const std::vector<double>& grid() const { return x_; }
    const std::vector<double>& values() const { return y_; }
    const std::vector<double>& yprime_right() const { return vr_; }
    const std::vector<double>& yprime_left() const { return vl_; }
    const std::string& method() const { return method_; }
    const std::string& measure_desc() const { return measure_desc_; }

    double x_front() const { return x_.front(); }
    double x_back() const { return x_.back(); }

    double eval(double x) const;
    double eval_yprime(double x) const;  // right-continuous in x

private:
    std::size_t cell_of(double x) const;

    std::string method_;
    std::string measure_desc_;
    std::vector<double> x_, y_, vl_, vr_;
};

// Columns x,y,yprime with yprime the right-hand derivative, full precision.
void write_csv(const Solution& s, std::ostream& os);

}  // namespace vst
