#pragma once

// JSON forms of the public data types. Rationals are "p/q" strings (integers
// are also accepted on input); nothing is ever written as a float.
//
//   valuation   {"breakpoints": [...], "densities": [...], "density_bound": "4"}
//   valuations  {"valuations": [valuation, ...]}   (a bare array is accepted)
//   instance    {"m": 4, "k": 4, "x": [...], "y": [...]}
//   report      {"pass": true, "slack": "1/8", "witness": [0, 1]}

#include <vector>

#include <nlohmann/json.hpp>

#include "fairdiv/crossing.hpp"
#include "fairdiv/oracle.hpp"
#include "fairdiv/valuation.hpp"

namespace fairdiv {

Rational rational_from_json(const nlohmann::json& j);

nlohmann::json to_json(const DensityValuation& v);
DensityValuation valuation_from_json(const nlohmann::json& j);

nlohmann::json valuations_to_json(const std::vector<DensityValuation>& vals);
std::vector<DensityValuation> valuations_from_json(const nlohmann::json& j);

/// General instances are written with k = m.
nlohmann::json to_json(const CrossingInstance& instance);
nlohmann::json to_json(const MonCrossingInstance& instance);
/// Neither validates; k defaults to m when absent.
CrossingInstance crossing_from_json(const nlohmann::json& j);
MonCrossingInstance mon_crossing_from_json(const nlohmann::json& j);

nlohmann::json to_json(const FairnessReport& report);

}  // namespace fairdiv
