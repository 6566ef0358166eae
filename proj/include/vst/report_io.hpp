#pragma once
#include <string>

#include "json.hpp"
#include "vst/asymptotics.hpp"
#include "vst/fixedpoint.hpp"
#include "vst/hypotheses.hpp"
#include "vst/quadrature.hpp"

namespace vst {

// JSON shapes used by the command line reports.  Non-finite numbers are
// mapped to strings ("inf", "-inf", "nan") so the output stays valid JSON.
nlohmann::json to_json(const TailResult& t);
nlohmann::json to_json(const HypothesisReport& r);
nlohmann::json to_json(const AsymptoticClass& c);
nlohmann::json to_json(const IterationReport& r);

// Current time as ISO 8601 UTC, second resolution.
std::string timestamp_utc();

// Writes the object to `path` with a top-level "generated_at" timestamp
// added, two-space indented.  Consumers comparing runs should drop that one
// key; everything else is deterministic.
void write_report(nlohmann::json j, const std::string& path);

}  // namespace vst
