#pragma once

#include <string>

#include "json.hpp"
#include "modcomm/regions.hpp"

namespace modcomm::cli {

// Evaluates a region expression: a single-key object naming one of
// all, sites, sector, disk, rectangle, edge_band, union, intersect, subtract.
// Lengths are in model units, angles in degrees.
Region eval_region(const nlohmann::json& expr, const LatticeModel& model, const std::string& label);

// Throws ConfigError when the expression tree is malformed; needs no model.
void check_region(const nlohmann::json& expr, const std::string& where);

}  // namespace modcomm::cli
