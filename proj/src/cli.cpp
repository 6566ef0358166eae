#include "vst/cli.hpp"

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "vst/asymptotics.hpp"
#include "vst/fixedpoint.hpp"
#include "vst/hypotheses.hpp"
#include "vst/ivp.hpp"
#include "vst/problem_file.hpp"
#include "vst/report_io.hpp"

namespace vst {
namespace {

namespace fs = std::filesystem;

struct OutDir {
    std::string dir = ".";
    std::string path(const std::string& name) const {
        fs::create_directories(dir);
        return (fs::path(dir) / name).string();
    }
};

StartSpec parse_start(const std::string& s) {
    if (s == "f") return StartFromF{};
    char* end = nullptr;
    double v = std::strtod(s.c_str(), &end);
    if (!s.empty() && end == s.c_str() + s.size()) return v;
    return Expr::parse(s);
}

void write_solution_csv(const Solution& sol, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write '" + path + "'");
    write_csv(sol, out);
}

double pick(const std::optional<double>& flag, const std::optional<double>& file,
            double fallback) {
    return flag ? *flag : file.value_or(fallback);
}

double require(const std::optional<double>& v, const char* what) {
    if (!v) throw ProblemFileError(std::string("missing ") + what);
    return *v;
}

int do_solve(const ProblemFile& pf, const std::optional<double>& tol,
             const OutDir& out) {
    const Problem& p = pf.problem;
    const double y0 = require(pf.solver.y0, "[solver] y0");
    const double yp0 = require(pf.solver.yp0, "[solver] yp0");
    const double a = pf.solver.a.value_or(p.domain_start());
    const double b = require(pf.solver.b, "[solver] b");
    StepControl ctrl;
    if (tol) ctrl.abs_tol = ctrl.rel_tol = *tol;
    else if (pf.solver.tol) ctrl.abs_tol = ctrl.rel_tol = *pf.solver.tol;

    Solution sol = solve_ivp(p, y0, yp0, a, b, ctrl);
    const std::string csv = out.path("solution.csv");
    write_solution_csv(sol, csv);
    std::cout << "solved on [" << a << ", " << b << "]: " << sol.size()
              << " nodes, y(b) = " << sol.values().back() << "; wrote " << csv
              << "\n";
    return 0;
}

int do_fixpoint(const ProblemFile& pf, const std::optional<double>& tol,
                const std::optional<double>& horizon,
                const std::optional<int>& max_iter, const OutDir& out,
                Solution* sol_out = nullptr, IterationReport* rep_out = nullptr) {
    const Problem& p = pf.problem;
    const double x0 = pf.solver.x0.value_or(p.domain_start());
    const double h = horizon ? *horizon
                             : require(pf.solver.horizon, "[solver] horizon");
    const double eps = pick(tol, pf.solver.tol, 1e-10);
    const int iters = max_iter ? *max_iter : pf.solver.max_iter.value_or(40);
    const StartSpec start = parse_start(pf.solver.start.value_or("f"));

    auto [sol, rep] = picard_solve(p, start, x0, h, eps, iters);
    write_solution_csv(sol, out.path("solution.csv"));
    write_report(to_json(rep), out.path("iteration.json"));
    std::cout << "picard: " << rep.iterations << " iteration(s), "
              << (rep.converged ? "converged" : "no convergence")
              << (rep.diverging ? " (diverging)" : "")
              << ", tail bound " << rep.tail_bound << "; wrote "
              << out.path("solution.csv") << ", " << out.path("iteration.json")
              << "\n";
    if (sol_out) *sol_out = std::move(sol);
    if (rep_out) *rep_out = rep;
    return rep.converged ? 0 : 3;
}

int do_check(const ProblemFile& pf, const std::optional<std::string>& profile_flag,
             const std::optional<double>& x0_flag, const OutDir& out) {
    const Problem& p = pf.problem;
    std::optional<std::string> profile =
        profile_flag ? profile_flag : pf.theorem.profile;
    if (!profile)
        throw ProblemFileError("no profile: pass --profile or set [theorem] profile");
    const double x0 = x0_flag ? *x0_flag : pf.solver.x0.value_or(p.domain_start());

    std::vector<HypothesisReport> reports;
    nlohmann::json j{{"profile", *profile}, {"x0", x0}};

    if (*profile == "thm-2.4") {
        if (!p.f || !p.k || !p.delta)
            throw ProblemFileError("profile thm-2.4 needs f, k and delta");
        reports.push_back(check_contraction(*p.k, p.measure, x0));
        const double lip_hi = std::max(10.0 * std::max(x0, 1.0), x0 + 100.0);
        reports.push_back(lipschitz_sampled(p.F, *p.k, x0, lip_hi));
        reports.push_back(check_smallness_at(p, x0));
        try {
            j["x0_recommended"] = find_x0(p);
        } catch (const HypothesisError&) {
            // No admissible point below the search bound; leave the key out.
        }
    } else if (*profile == "thm-4.8") {
        if (!pf.theorem.M)
            throw ProblemFileError("profile thm-4.8 needs M in [theorem]");
        reports.push_back(nehari_check(p.F, p.measure, *pf.theorem.M, x0));
    } else if (*profile == "thm-4.2") {
        if (!pf.theorem.M)
            throw ProblemFileError("profile thm-4.2 needs M in [theorem]");
        reports.push_back(linear_growth_check(p.F, p.measure, *pf.theorem.M, x0));
    } else {
        throw ProblemFileError("unknown profile '" + *profile + "'");
    }

    bool all_hold = true;
    nlohmann::json arr = nlohmann::json::array();
    for (const HypothesisReport& r : reports) {
        arr.push_back(to_json(r));
        std::cout << r.name << ": " << to_string(r.verdict) << " (value "
                  << r.value << ")\n";
        if (r.verdict != Verdict::Holds) all_hold = false;
    }
    j["reports"] = std::move(arr);
    write_report(j, out.path("checks.json"));
    std::cout << "wrote " << out.path("checks.json") << "\n";
    return all_hold ? 0 : 1;
}

int do_classify(const ProblemFile& pf, const std::optional<double>& tol,
                const std::optional<double>& horizon,
                const std::optional<int>& max_iter, const OutDir& out) {
    const Problem& p = pf.problem;
    std::string mode = pf.solver.mode.value_or(
        pf.solver.y0 && pf.solver.yp0 && pf.solver.b ? "ivp" : "fixpoint");

    Solution sol("unset", "");
    if (mode == "ivp") {
        StepControl ctrl;
        const double t = pick(tol, pf.solver.tol, 1e-10);
        ctrl.abs_tol = ctrl.rel_tol = t;
        sol = solve_ivp(p, require(pf.solver.y0, "[solver] y0"),
                        require(pf.solver.yp0, "[solver] yp0"),
                        pf.solver.a.value_or(p.domain_start()),
                        require(pf.solver.b, "[solver] b"), ctrl);
    } else if (mode == "fixpoint") {
        int rc = do_fixpoint(pf, tol, horizon, max_iter, out, &sol);
        if (rc != 0) return rc;
    } else {  // discrete
        if (!pf.solver.b_seq)
            throw ProblemFileError("discrete mode needs [solver] b_seq");
        const Expr b = Expr::parse(*pf.solver.b_seq, "n", "");
        auto ys = solve_recurrence(p.F, b, require(pf.solver.y0, "[solver] y0"),
                                   require(pf.solver.y1, "[solver] y1"),
                                   static_cast<std::size_t>(
                                       pf.solver.steps.value_or(64)));
        Solution seq("recurrence", p.measure.describe());
        for (std::size_t n = 0; n < ys.size(); ++n)
            seq.push_node(static_cast<double>(n), ys[n], 0.0, 0.0);
        sol = std::move(seq);
    }

    AsymptoticClass cls = classify(sol, p.f);
    write_report(to_json(cls), out.path("classification.json"));
    std::cout << "tail: " << to_string(cls.kind);
    if (cls.kind == AsymptoticKind::Linear)
        std::cout << " (A = " << cls.A << ", B = " << cls.B << ")";
    if (cls.kind == AsymptoticKind::Constant)
        std::cout << " (B = " << cls.B << ")";
    std::cout << ", " << cls.sign_changes << " sign change(s); wrote "
              << out.path("classification.json") << "\n";
    return 0;
}

int do_discrete(const ProblemFile& pf, const OutDir& out) {
    const Problem& p = pf.problem;
    if (!pf.solver.b_seq)
        throw ProblemFileError("discrete mode needs [solver] b_seq");
    const Expr b = Expr::parse(*pf.solver.b_seq, "n", "");
    const double y0 = require(pf.solver.y0, "[solver] y0");
    const double y1 = require(pf.solver.y1, "[solver] y1");
    const long N = pf.solver.steps.value_or(64);
    if (N < 1) throw ProblemFileError("[solver] steps must be >= 1");

    auto ys = solve_recurrence(p.F, b, y0, y1, static_cast<std::size_t>(N));
    const std::string csv = out.path("sequence.csv");
    std::ofstream f(csv);
    if (!f) throw std::runtime_error("cannot write '" + csv + "'");
    f << "n,y\n";
    char buf[48];
    for (std::size_t n = 0; n < ys.size(); ++n) {
        std::snprintf(buf, sizeof buf, "%zu,%.17g\n", n, ys[n]);
        f << buf;
    }
    std::cout << "recurrence: " << ys.size() << " terms, y_N = " << ys.back()
              << "; wrote " << csv << "\n";
    return 0;
}

}  // namespace

int run_cli(int argc, const char* const* argv) {
    CLI::App app{"half-axis integral and integro-differential equation toolbox"};
    app.require_subcommand(1);
    app.fallthrough();

    OutDir out;
    app.add_option("--out", out.dir, "output directory (also via VST_OUT)")
        ->envname("VST_OUT");

    std::string file;
    std::optional<double> tol, horizon, x0;
    std::optional<int> max_iter;
    std::optional<std::string> profile;

    auto add_file = [&](CLI::App* cmd) {
        cmd->add_option("file", file, "problem file")->required();
    };

    CLI::App* solve = app.add_subcommand("solve", "integrate the initial value problem");
    add_file(solve);
    solve->add_option("--tol", tol, "step tolerance");

    CLI::App* fixpoint = app.add_subcommand("fixpoint", "iterate the integral operator");
    add_file(fixpoint);
    fixpoint->add_option("--tol", tol, "sup-norm stopping tolerance");
    fixpoint->add_option("--horizon", horizon, "grid truncation point");
    fixpoint->add_option("--max-iter", max_iter, "iteration cap");

    CLI::App* check = app.add_subcommand("check", "run a hypothesis profile");
    add_file(check);
    check->add_option("--profile", profile, "thm-2.4, thm-4.8 or thm-4.2");
    check->add_option("--x0", x0, "base point for the tail conditions");

    CLI::App* classify_cmd = app.add_subcommand("classify", "classify the tail of the solution");
    add_file(classify_cmd);
    classify_cmd->add_option("--tol", tol, "solver tolerance");
    classify_cmd->add_option("--horizon", horizon, "grid truncation point");
    classify_cmd->add_option("--max-iter", max_iter, "iteration cap");

    CLI::App* discrete = app.add_subcommand("discrete", "step the difference scheme");
    add_file(discrete);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        ProblemFile pf = load_problem_file(file);
        if (solve->parsed()) return do_solve(pf, tol, out);
        if (fixpoint->parsed()) return do_fixpoint(pf, tol, horizon, max_iter, out);
        if (check->parsed()) return do_check(pf, profile, x0, out);
        if (classify_cmd->parsed()) return do_classify(pf, tol, horizon, max_iter, out);
        return do_discrete(pf, out);
    } catch (const ProblemFileError& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return 2;
    } catch (const ParseError& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return 2;
    } catch (const MeasureError& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return 2;
    } catch (const HypothesisError& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        // Solver, quadrature, fixed point and evaluation failures.
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 3;
    }
}

}  // namespace vst
