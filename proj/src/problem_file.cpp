#include "vst/problem_file.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <limits>
#include <sstream>
#include <vector>

namespace vst {
namespace {

struct Line {
    int number;
    std::string text;
};

[[noreturn]] void fail(const std::string& origin, int line,
                       const std::string& msg) {
    throw ProblemFileError(origin + ":" + std::to_string(line) + ": " + msg);
}

std::string trim(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    std::size_t e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

// Splits a value into whitespace-separated tokens; double quotes group a
// token and are stripped.  Quotes may contain any character except a quote.
std::vector<std::string> tokens(const std::string& origin, int line,
                                const std::string& value) {
    std::vector<std::string> out;
    std::size_t i = 0;
    while (i < value.size()) {
        if (value[i] == ' ' || value[i] == '\t') {
            ++i;
        } else if (value[i] == '"') {
            std::size_t close = value.find('"', i + 1);
            if (close == std::string::npos)
                fail(origin, line, "unterminated quote in value");
            out.push_back(value.substr(i + 1, close - i - 1));
            i = close + 1;
        } else {
            std::size_t end = value.find_first_of(" \t", i);
            if (end == std::string::npos) end = value.size();
            out.push_back(value.substr(i, end - i));
            i = end;
        }
    }
    return out;
}

double parse_number(const std::string& origin, int line, const std::string& s) {
    if (s == "inf" || s == "+inf") return std::numeric_limits<double>::infinity();
    const char* c = s.c_str();
    char* end = nullptr;
    double v = std::strtod(c, &end);
    if (end != c + s.size() || s.empty())
        fail(origin, line, "expected a number, got '" + s + "'");
    return v;
}

long parse_long(const std::string& origin, int line, const std::string& s) {
    const char* c = s.c_str();
    char* end = nullptr;
    long v = std::strtol(c, &end, 10);
    if (end != c + s.size() || s.empty())
        fail(origin, line, "expected an integer, got '" + s + "'");
    return v;
}

Expr parse_formula(const std::string& origin, int line, const std::string& s,
                   const char* var1 = "x", const char* var2 = "y") {
    try {
        return Expr::parse(s, var1, var2);
    } catch (const ParseError& e) {
        fail(origin, line, "bad formula '" + s + "': " + e.what());
    }
}

}  // namespace

ProblemFile load_problem_file(std::istream& in, const std::string& origin) {
    std::optional<Expr> F, f, k;
    std::optional<double> delta;
    double start = 0.0;
    std::vector<Atom> atoms;
    std::vector<AtomRule> rules;
    std::vector<DensitySegment> density;
    SolverSettings solver;
    TheoremSettings theorem;

    std::string section;
    std::string raw;
    int line = 0;
    while (std::getline(in, raw)) {
        ++line;
        std::string s = raw;
        std::size_t hash = s.find_first_of("#;");
        if (hash != std::string::npos) s.erase(hash);
        s = trim(s);
        if (s.empty()) continue;

        if (s.front() == '[') {
            if (s.back() != ']')
                fail(origin, line, "unterminated section header");
            section = trim(s.substr(1, s.size() - 2));
            if (section != "problem" && section != "measure" &&
                section != "solver" && section != "theorem")
                fail(origin, line, "unknown section [" + section + "]");
            continue;
        }

        std::size_t eq = s.find('=');
        if (eq == std::string::npos)
            fail(origin, line, "expected 'key = value'");
        std::string key = trim(s.substr(0, eq));
        std::string value = trim(s.substr(eq + 1));
        if (key.empty() || value.empty())
            fail(origin, line, "expected 'key = value'");
        if (section.empty())
            fail(origin, line, "key '" + key + "' appears before any section");

        if (section == "problem") {
            if (key == "F") F = parse_formula(origin, line, value);
            else if (key == "f") f = parse_formula(origin, line, value);
            else if (key == "k") k = parse_formula(origin, line, value);
            else if (key == "delta") delta = parse_number(origin, line, value);
            else fail(origin, line, "unknown key '" + key + "' in [problem]");
        } else if (section == "measure") {
            if (key == "start") {
                start = parse_number(origin, line, value);
            } else if (key == "density") {
                auto t = tokens(origin, line, value);
                if (t.size() != 3)
                    fail(origin, line, "density needs: lo hi \"rho\"");
                density.push_back({parse_number(origin, line, t[0]),
                                   parse_number(origin, line, t[1]),
                                   parse_formula(origin, line, t[2])});
            } else if (key == "atom") {
                auto t = tokens(origin, line, value);
                if (t.size() != 2) fail(origin, line, "atom needs: loc jump");
                atoms.push_back({parse_number(origin, line, t[0]),
                                 parse_number(origin, line, t[1])});
            } else if (key == "atoms") {
                auto t = tokens(origin, line, value);
                if (t.size() != 3 && t.size() != 4)
                    fail(origin, line,
                         "atoms needs: \"loc\" \"jump\" first [count]");
                AtomRule r{parse_formula(origin, line, t[0], "n", ""),
                           parse_formula(origin, line, t[1], "n", ""),
                           parse_long(origin, line, t[2]), std::nullopt};
                if (t.size() == 4) r.count = parse_long(origin, line, t[3]);
                rules.push_back(std::move(r));
            } else {
                fail(origin, line, "unknown key '" + key + "' in [measure]");
            }
        } else if (section == "solver") {
            if (key == "mode") {
                if (value != "fixpoint" && value != "ivp" && value != "discrete")
                    fail(origin, line, "mode must be fixpoint, ivp or discrete");
                solver.mode = value;
            }
            else if (key == "x0") solver.x0 = parse_number(origin, line, value);
            else if (key == "horizon") solver.horizon = parse_number(origin, line, value);
            else if (key == "tol") solver.tol = parse_number(origin, line, value);
            else if (key == "max_iter")
                solver.max_iter = static_cast<int>(parse_long(origin, line, value));
            else if (key == "start") solver.start = value;
            else if (key == "y0") solver.y0 = parse_number(origin, line, value);
            else if (key == "yp0") solver.yp0 = parse_number(origin, line, value);
            else if (key == "a") solver.a = parse_number(origin, line, value);
            else if (key == "b") solver.b = parse_number(origin, line, value);
            else if (key == "y1") solver.y1 = parse_number(origin, line, value);
            else if (key == "steps") solver.steps = parse_long(origin, line, value);
            else if (key == "b_seq") solver.b_seq = value;
            else fail(origin, line, "unknown key '" + key + "' in [solver]");
        } else {  // theorem
            if (key == "profile") theorem.profile = value;
            else if (key == "M") theorem.M = parse_number(origin, line, value);
            else if (key == "eps") theorem.eps = parse_number(origin, line, value);
            else fail(origin, line, "unknown key '" + key + "' in [theorem]");
        }
    }

    if (!F) throw ProblemFileError(origin + ": missing F in [problem]");
    if (delta && !(*delta > 0))
        throw ProblemFileError(origin + ": delta must be positive");

    Measure m = [&] {
        try {
            return Measure::from_parts(start, std::move(atoms), std::move(rules),
                                       std::move(density));
        } catch (const MeasureError& e) {
            throw ProblemFileError(origin + ": " + e.what());
        }
    }();

    ProblemFile pf{Problem{std::move(*F), std::move(m), std::move(f),
                           std::move(k), delta},
                   std::move(solver), std::move(theorem)};
    return pf;
}

ProblemFile load_problem_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ProblemFileError("cannot open problem file '" + path + "'");
    return load_problem_file(in, path);
}

}  // namespace vst
