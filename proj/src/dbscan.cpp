#include "stormcast/dbscan.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <stdexcept>
#include <unordered_map>

namespace stormcast {

void DbscanParams::validate() const {
    if (!(eps > 0.0)) throw std::invalid_argument("eps must be > 0");
    if (min_pts < 1) throw std::invalid_argument("min_pts must be >= 1");
}

namespace {

constexpr int kUnvisited = -2;

// Uniform grid with cell size eps: a closed eps-ball around any point only
// touches the 3x3 block of cells around its own.
class GridIndex {
public:
    GridIndex(const std::vector<Point2D>& points, double eps)
        : points_(points), eps_(eps), eps2_(eps * eps) {
        cells_.reserve(points.size());
        for (size_t i = 0; i < points.size(); ++i)
            cells_[key(points[i])].push_back(static_cast<int>(i));
    }

    // Indices with dist <= eps, ascending; identical to exhaustive search.
    std::vector<int> query(int i) const {
        const Point2D& p = points_[static_cast<size_t>(i)];
        std::vector<int> out;
        const auto [cx, cy] = cell_of(p);
        for (int64_t gy = cy - 1; gy <= cy + 1; ++gy) {
            for (int64_t gx = cx - 1; gx <= cx + 1; ++gx) {
                auto it = cells_.find(pack(gx, gy));
                if (it == cells_.end()) continue;
                for (int j : it->second) {
                    const double dx = points_[static_cast<size_t>(j)].x - p.x;
                    const double dy = points_[static_cast<size_t>(j)].y - p.y;
                    if (dx * dx + dy * dy <= eps2_) out.push_back(j);
                }
            }
        }
        std::sort(out.begin(), out.end());
        return out;
    }

private:
    std::pair<int64_t, int64_t> cell_of(const Point2D& p) const {
        const double gx = std::clamp(std::floor(p.x / eps_), -1e15, 1e15);
        const double gy = std::clamp(std::floor(p.y / eps_), -1e15, 1e15);
        return {static_cast<int64_t>(gx), static_cast<int64_t>(gy)};
    }
    static uint64_t pack(int64_t gx, int64_t gy) {
        return (static_cast<uint64_t>(gx) << 32) ^ static_cast<uint64_t>(gy & 0xffffffff);
    }
    uint64_t key(const Point2D& p) const {
        auto [gx, gy] = cell_of(p);
        return pack(gx, gy);
    }

    const std::vector<Point2D>& points_;
    double eps_;
    double eps2_;
    std::unordered_map<uint64_t, std::vector<int>> cells_;
};

} // namespace

ClusterLabeling dbscan(const std::vector<Point2D>& points, const DbscanParams& params) {
    params.validate();
    for (const auto& p : points)
        if (!std::isfinite(p.x) || !std::isfinite(p.y))
            throw std::invalid_argument("non-finite point coordinates");

    ClusterLabeling result;
    result.labels.assign(points.size(), kUnvisited);
    if (points.empty()) return result;

    GridIndex index(points, params.eps);
    int cluster = 0;

    for (size_t i = 0; i < points.size(); ++i) {
        if (result.labels[i] != kUnvisited) continue;

        std::vector<int> neighbors = index.query(static_cast<int>(i));
        if (neighbors.size() < static_cast<size_t>(params.min_pts)) {
            result.labels[i] = ClusterLabeling::kNoise;
            continue;
        }

        result.labels[i] = cluster;
        std::deque<int> seeds(neighbors.begin(), neighbors.end());
        while (!seeds.empty()) {
            const int j = seeds.front();
            seeds.pop_front();
            if (result.labels[static_cast<size_t>(j)] == ClusterLabeling::kNoise)
                result.labels[static_cast<size_t>(j)] = cluster; // border point
            if (result.labels[static_cast<size_t>(j)] != kUnvisited) continue;
            result.labels[static_cast<size_t>(j)] = cluster;

            std::vector<int> reach = index.query(j);
            if (reach.size() >= static_cast<size_t>(params.min_pts))
                seeds.insert(seeds.end(), reach.begin(), reach.end());
        }
        ++cluster;
    }

    result.n_clusters = cluster;
    return result;
}

int count_regions(const ClusterLabeling& labeling) { return labeling.n_clusters; }

std::vector<Point2D> foreground_points(const BinaryImage& img) {
    std::vector<Point2D> pts;
    for (int y = 0; y < img.height(); ++y)
        for (int x = 0; x < img.width(); ++x)
            if (img.at(x, y)) pts.push_back({double(x), double(y)});
    return pts;
}

} // namespace stormcast
