#pragma once

#include <string>
#include <vector>

#include "davnav/engine.hpp"
#include "davnav/gridmap.hpp"
#include "davnav/metrics.hpp"

namespace davnav {

// Cells of the route whose length defines g: the fewest-action geodesic
// route from the start pose to the catch cell. Empty when infeasible.
std::vector<Cell> intercept_path(const GridMap& map, Pose start, const InterceptResult& oracle);

// SVG figure: walls in grey, agent path blue, target path red, intercept
// route green. The intercept route and g are also listed as text.
std::string plot_episode_svg(const GridMap& map, const EpisodeLog& log, const InterceptResult& oracle);

}  // namespace davnav
