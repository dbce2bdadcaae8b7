#pragma once

#include "uniband/band.hpp"
#include "uniband/grid.hpp"
#include "uniband/sim.hpp"

#include <json.hpp>

namespace uniband {

//! Stable JSON shapes for the report types; keys are documented in the
//! README and locked by tests.
nlohmann::json to_json(const ConstantsReport& report);
nlohmann::json to_json(const UniformBand& band);
nlohmann::json to_json(const CoverageReport& report, bool include_trace = false);

} // namespace uniband
