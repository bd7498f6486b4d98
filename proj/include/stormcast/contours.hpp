#pragma once

#include <vector>

#include "stormcast/raster.hpp"

namespace stormcast {

// One closed boundary. Consecutive points are 8-connected, as are the first
// and last. Only external boundaries are produced by find_contours.
struct Contour {
    std::vector<std::pair<int, int>> points; // (x, y)
    bool is_external = true;

    size_t perimeter() const { return points.size(); }
};

// External contour of every 8-connected foreground component, traced by
// raster-scan border following. Hole boundaries are not returned, so the
// contour count equals the component count.
std::vector<Contour> find_contours(const BinaryImage& edges);

// Contours with perimeter (point count) >= min_perimeter. The default 4
// suppresses single-pixel noise.
int count_sunspots(const std::vector<Contour>& contours, size_t min_perimeter = 4);

} // namespace stormcast
