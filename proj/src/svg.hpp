#pragma once

#include <string>

#include "instance.hpp"
#include "solution.hpp"

namespace hqts {

// Standalone SVG of the routes: one colored polyline loop per vehicle,
// customer dots, square depot marker. Requires coordinates; throws
// ValidationError otherwise. The viewport wraps all locations with a 5%
// margin. Output is deterministic.
std::string render_routes_svg(const Solution& s, const CvrpInstance& inst);

}  // namespace hqts
