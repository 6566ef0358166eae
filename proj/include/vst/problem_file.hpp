#pragma once
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>

#include "vst/problem.hpp"

namespace vst {

class ProblemFileError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Settings from the [solver] section.  Everything is optional; subcommands
// reject combinations they cannot use.
struct SolverSettings {
    std::optional<std::string> mode;   // fixpoint | ivp | discrete
    std::optional<double> x0;          // left end for the integral equation
    std::optional<double> horizon;     // truncation point for the grid
    std::optional<double> tol;
    std::optional<int> max_iter;
    std::optional<std::string> start;  // number, "f", or a formula in x
    std::optional<double> y0, yp0;     // initial data
    std::optional<double> a, b;        // integration range
    std::optional<double> y1;          // second seed of a difference scheme
    std::optional<long> steps;         // number of discrete steps
    std::optional<std::string> b_seq;  // coefficient formula in n
};

// Settings from the [theorem] section.
struct TheoremSettings {
    std::optional<std::string> profile;
    std::optional<double> M;
    std::optional<double> eps;
};

struct ProblemFile {
    Problem problem;
    SolverSettings solver;
    TheoremSettings theorem;
};

// Parses the INI-style problem format:
//
//   [problem]
//   F = (1+y)/x^5          # required, formula in (x, y)
//   f = x^2/2              # optional formula in x
//   k = 1/x^5              # optional formula in x
//   delta = 0.5            # optional positive number
//
//   [measure]
//   start = 1              # domain start (default 0)
//   density = 1 inf "1"    # lo hi "rho"; repeatable
//   atom = 5 0.25          # loc jump; repeatable
//   atoms = "n" "2^(-n)" 1 # "loc" "jump" first [count]; repeatable
//
//   [solver] / [theorem]   # keys as in the structs above
//
// '#' and ';' start comments.  Errors carry 1-based line numbers.
ProblemFile load_problem_file(std::istream& in,
                              const std::string& origin = "<stream>");

ProblemFile load_problem_file(const std::string& path);

}  // namespace vst
