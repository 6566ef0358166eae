#pragma once
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace vst {

// Raised when a formula string cannot be parsed; `offset` is the byte
// position in the input where the problem was detected.
class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& msg, std::size_t off)
        : std::runtime_error(msg), offset(off) {}
    std::size_t offset;
};

// Raised when evaluation hits a domain error or produces a non-finite value.
class EvalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Immutable parsed formula in up to two variables.  Supports + - * / ^
// (with ^ binding tightest and associating to the right), unary minus,
// the functions sin, cos, exp, log, abs, sqrt, min, max and the named
// constants pi and e.  There is no implicit multiplication.
//
// Instances are cheap to copy (the tree is shared) and safe to evaluate
// from several threads at once.
class Expr {
public:
    struct Node;

    // Parse with the default variable names "x" and "y".
    static Expr parse(std::string_view text);

    // Parse with custom variable names, e.g. ("n", "y") for sequence
    // formulas.  Pass an empty second name to forbid the second variable.
    static Expr parse(std::string_view text, std::string_view first_var,
                      std::string_view second_var);

    // Evaluate.  Throws EvalError if the formula references the second
    // variable and none is supplied, or if the result is not finite.
    double eval(double x) const { return eval_impl(x, std::nullopt); }
    double eval(double x, double y) const { return eval_impl(x, y); }

    bool uses_second_var() const;

    // Render in a form that parses back to an identical tree.
    std::string str() const;

    // The text this expression was parsed from, for diagnostics.
    const std::string& source() const { return source_; }

private:
    Expr(std::shared_ptr<const Node> root, std::string source,
         std::string v1, std::string v2);
    double eval_impl(double x, std::optional<double> y) const;

    std::shared_ptr<const Node> root_;
    std::string source_;
    std::string var1_, var2_;
};

// Free-function spellings used throughout the solver code.
inline Expr parse_expr(std::string_view text) { return Expr::parse(text); }
double eval_expr(const Expr& e, double x, std::optional<double> y = std::nullopt);

}  // namespace vst
