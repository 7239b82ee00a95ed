#pragma once

#include <optional>
#include <string>

#include "gcs/astar_gcs.hpp"
#include "gcs/graph.hpp"

namespace gcs {

/// Renders a 2-D instance to SVG: vertex sets, edges between centroids,
/// cut-set membership shading and the solution path as a single polyline.
/// Throws InputError for instances that are not 2-dimensional.
std::string render_svg(const GcsGraph& graph,
                       const std::optional<RunResult>& result);

}  // namespace gcs
