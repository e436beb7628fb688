#pragma once
#include <iosfwd>
#include <string>

#include "railrisk/pipeline.hpp"

namespace railrisk {

// Versioned machine-readable report (JSON, stable key order). Repeated runs
// on identical input produce byte-identical output.
std::string machine_report(const RiskReport& report, bool include_pmfs = false);

// Aligned human-readable tables carrying the same numbers.
std::string table_report(const RiskReport& report);

void write_file(const std::string& path, const std::string& content);

}  // namespace railrisk
