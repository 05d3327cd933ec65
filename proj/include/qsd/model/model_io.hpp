#pragma once

#include <filesystem>

#include "json.hpp"
#include "qsd/model/model.hpp"

namespace qsd {

/// Model <-> JSON, schema documented in docs/formats.md. Sites in the target
/// region are given as coordinate vectors.
Model model_from_json(const nlohmann::json& j);
nlohmann::json model_to_json(const Model& m);

OccupancyFunction occupancy_from_json(const nlohmann::json& j);
nlohmann::json occupancy_to_json(const OccupancyFunction& g);

}  // namespace qsd
