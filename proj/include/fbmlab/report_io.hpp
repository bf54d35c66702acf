#pragma once

#include "fbmlab/experiments.hpp"

#include <string>

namespace fbmlab {

enum class ReportFormat { csv, json };

// Parses "csv" or "json"; throws ConfigError otherwise.
ReportFormat parse_format(const std::string& name);

// "n_min:n_max" (a bare "n" means n:n); throws ConfigError on anything else.
DyadicRange parse_levels(const std::string& text);
std::string levels_string(const DyadicRange& levels);

// Shortest decimal string that round-trips to the same double.
std::string format_double(double x);

extern const char* const kLevelCsvHeader;      // the pinned 12-column schema
extern const char* const kDoobMeyerCsvHeader;

std::string to_csv(const ConvergenceReport& report);
std::string to_csv(const DoobMeyerReport& report);

std::string to_json_string(const ConvergenceReport& report);
std::string to_json_string(const DoobMeyerReport& report);

// Manifest alone, as embedded in JSON reports and CSV sidecars.
std::string manifest_json(const RunManifest& manifest);

// Accepts either a bare manifest or a full report; extracts the manifest.
RunManifest manifest_from_json(const std::string& text);

ConvergenceReport convergence_from_json(const std::string& text);
DoobMeyerReport doob_meyer_from_json(const std::string& text);

}  // namespace fbmlab
