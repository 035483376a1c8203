#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "conclab/montecarlo.hpp"

namespace conclab {

using ordered_json = nlohmann::ordered_json;

// "start:stop:step", endpoints inclusive within half a step. A bare number
// parses as a single-point grid.
std::vector<double> parse_grid(const std::string& spec);

// %.17g: shortest text that survives a read-back round trip.
std::string format_double(double v);

ordered_json to_json(const VerificationReport& report);
ordered_json to_json(const VerificationRun& run, bool with_timestamp);

// Fixed-schema CSV of the tail rows:
//   r,empirical,exact,bound_thm_main,bound_gromov,bound_cor41,margin
// Absent values are empty fields. Built from the JSON document so that
// `inspect` reproduces it byte for byte from a written report.
std::string csv_header();
std::string summary_table(const ordered_json& run_or_report);

} // namespace conclab
