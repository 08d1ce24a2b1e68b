#pragma once

// Named verification suites over seeded random samples. Each suite appends
// rows to the report in a fixed order; a given config and seed always
// produces the same rows with the same bytes.

#include <string>
#include <vector>

#include "fsgeo/config.hpp"
#include "fsgeo/report.hpp"

namespace fsgeo {

const std::vector<std::string>& known_suites();

ResidualReport run_suites(const SuiteConfig& cfg);

}  // namespace fsgeo
