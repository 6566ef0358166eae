#include "vst/report_io.hpp"

#include <cmath>
#include <ctime>
#include <fstream>

namespace vst {
namespace {

nlohmann::json finite_or_string(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    return v;
}

}  // namespace

nlohmann::json to_json(const TailResult& t) {
    return {{"value", finite_or_string(t.value)},
            {"converged", t.converged},
            {"x_reached", finite_or_string(t.x_reached)},
            {"tail_estimate", finite_or_string(t.tail_estimate)},
            {"segments_used", t.segments_used}};
}

nlohmann::json to_json(const HypothesisReport& r) {
    nlohmann::json tails = nlohmann::json::array();
    for (const TailResult& t : r.tails) tails.push_back(to_json(t));
    return {{"name", r.name},
            {"verdict", to_string(r.verdict)},
            {"value", finite_or_string(r.value)},
            {"threshold", finite_or_string(r.threshold)},
            {"tails", std::move(tails)},
            {"notes", r.notes}};
}

nlohmann::json to_json(const AsymptoticClass& c) {
    return {{"kind", to_string(c.kind)},
            {"A", finite_or_string(c.A)},
            {"B", finite_or_string(c.B)},
            {"residual", finite_or_string(c.residual)},
            {"residual_trend", finite_or_string(c.residual_trend)},
            {"sign_changes", c.sign_changes},
            {"window", {finite_or_string(c.window_lo), finite_or_string(c.window_hi)}}};
}

nlohmann::json to_json(const IterationReport& r) {
    nlohmann::json deltas = nlohmann::json::array();
    for (double d : r.sup_deltas) deltas.push_back(finite_or_string(d));
    nlohmann::json j{{"iterations", r.iterations},
                     {"sup_deltas", std::move(deltas)},
                     {"converged", r.converged},
                     {"diverging", r.diverging},
                     {"horizon", finite_or_string(r.horizon)},
                     {"tail_bound", finite_or_string(r.tail_bound)},
                     {"weighted", r.weighted},
                     {"notes", r.notes}};
    if (r.contraction_ratio)
        j["contraction_ratio"] = finite_or_string(*r.contraction_ratio);
    return j;
}

std::string timestamp_utc() {
    std::time_t now = std::time(nullptr);
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

void write_report(nlohmann::json j, const std::string& path) {
    j["generated_at"] = timestamp_utc();
    std::ofstream out(path);
    if (!out)
        throw std::runtime_error("cannot write report to '" + path + "'");
    out << j.dump(2) << "\n";
}

}  // namespace vst
