#pragma once

#include <vector>

#include "stormcast/raster.hpp"

namespace stormcast {

struct Point2D {
    double x = 0.0;
    double y = 0.0;
};

struct DbscanParams {
    double eps = 10.0; // pixels, at the 1024x1024 working resolution
    int min_pts = 5;

    void validate() const; // throws std::invalid_argument
};

struct ClusterLabeling {
    static constexpr int kNoise = -1;
    std::vector<int> labels; // per point: cluster id in [0, n_clusters) or kNoise
    int n_clusters = 0;
};

// Standard DBSCAN over Euclidean distance with a closed eps-ball (dist <= eps,
// the point itself included in its own neighborhood). Points are processed in
// input order, so border points shared between clusters go to the cluster
// whose core reaches them first. Neighborhood queries run on a uniform grid
// but return exactly the exhaustive-search result.
ClusterLabeling dbscan(const std::vector<Point2D>& points, const DbscanParams& params);

// Cluster count, noise excluded.
int count_regions(const ClusterLabeling& labeling);

// True pixels of a binary image in row-major order, as cluster input.
std::vector<Point2D> foreground_points(const BinaryImage& img);

} // namespace stormcast
