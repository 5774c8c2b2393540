#pragma once

#include <string>

#include "json.hpp"
#include "liemap/map.hpp"
#include "liemap/system.hpp"
#include "liemap/trajectory.hpp"

// Stable on-disk formats. Maps: {"n", "order", "dt", "basis": "grlex-desc",
// "weights": [{"degree", "rows", "cols", "data" (row-major)}]}. Systems:
// {"n", "terms": [{"target", "exponents", "coeff"}]}. Trajectories: CSV with
// header "t,x1,...,xn", written at full double precision; rows must be
// uniformly spaced in t (1e-9 relative) and lines starting with '#' are
// ignored. Malformed content throws std::invalid_argument (or the JSON
// library's parse errors) with a line/field diagnostic.
namespace liemap::io {

nlohmann::json map_to_json(const PolynomialMap& map);
PolynomialMap map_from_json(const nlohmann::json& j);
nlohmann::json system_to_json(const PolynomialSystem& sys);
PolynomialSystem system_from_json(const nlohmann::json& j);

void save_map(const PolynomialMap& map, const std::string& path);
PolynomialMap load_map(const std::string& path);
void save_system(const PolynomialSystem& sys, const std::string& path);
PolynomialSystem load_system(const std::string& path);

void save_trajectory_csv(const TrajectoryDataset& data, const std::string& path);
TrajectoryDataset load_trajectory_csv(const std::string& path);

}  // namespace liemap::io
