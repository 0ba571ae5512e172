#pragma once

#include <string>
#include <utility>
#include <vector>

#include "jumpsde/montecarlo.hpp"

namespace jumpsde::tools {

/// Static SVG 1.1 line chart of msq vs time with a log-scale ordinate, one
/// polyline per labeled series. Points with non-finite or non-positive msq
/// break the line. Output is a deterministic function of the input.
std::string render_moments_svg(
    const std::string& title,
    const std::vector<std::pair<std::string, const MomentSeries*>>& series);

}  // namespace jumpsde::tools
