#include "stormcast/contours.hpp"

#include <array>
#include <queue>
#include <stdexcept>

namespace stormcast {

namespace {

// Clockwise in screen coordinates (y grows downward), starting east.
constexpr std::array<std::pair<int, int>, 8> kRing{{
    {1, 0}, {1, 1}, {0, 1}, {-1, 1}, {-1, 0}, {-1, -1}, {0, -1}, {1, -1},
}};

int ring_index(int dx, int dy) {
    for (int i = 0; i < 8; ++i)
        if (kRing[size_t(i)].first == dx && kRing[size_t(i)].second == dy) return i;
    return -1;
}

bool fg(const BinaryImage& img, int x, int y) {
    return img.in_bounds(x, y) && img.at(x, y);
}

// Moore-neighbor tracing from the component's first raster-order pixel.
// A pre-scan locates the walk's predecessor of the start pixel; the trace
// stops when it is about to traverse that closing edge again.
Contour trace_boundary(const BinaryImage& img, int sx, int sy) {
    Contour contour;
    contour.points.emplace_back(sx, sy);

    // Predecessor: first foreground neighbor counterclockwise from west.
    // West of the first raster-order pixel is always background.
    int pred_x = sx, pred_y = sy;
    bool has_pred = false;
    for (int k = 1; k <= 7; ++k) {
        const int dir = (4 - k + 8) % 8;
        const int nx = sx + kRing[size_t(dir)].first;
        const int ny = sy + kRing[size_t(dir)].second;
        if (fg(img, nx, ny)) {
            pred_x = nx;
            pred_y = ny;
            has_pred = true;
            break;
        }
    }
    if (!has_pred) return contour; // isolated pixel

    int cx = sx, cy = sy;
    int back = 4;
    const size_t max_steps = 4 * static_cast<size_t>(img.width()) * img.height() + 8;
    for (size_t step = 0; ; ++step) {
        if (step > max_steps)
            throw std::logic_error("border following did not close");
        int found = 0;
        for (int k = 1; k <= 8; ++k) {
            const int dir = (back + k) % 8;
            if (fg(img, cx + kRing[size_t(dir)].first, cy + kRing[size_t(dir)].second)) {
                found = k;
                break;
            }
        }

        const int dir = (back + found) % 8;
        const int prev = (back + found + 7) % 8; // last background scanned
        const int nx = cx + kRing[size_t(dir)].first;
        const int ny = cy + kRing[size_t(dir)].second;
        if (nx == sx && ny == sy && cx == pred_x && cy == pred_y) break;

        // backtrack of the new pixel points at that background neighbor
        const int bx = cx + kRing[size_t(prev)].first;
        const int by = cy + kRing[size_t(prev)].second;
        cx = nx;
        cy = ny;
        back = ring_index(bx - cx, by - cy);
        contour.points.emplace_back(cx, cy);
    }
    return contour;
}

} // namespace

std::vector<Contour> find_contours(const BinaryImage& edges) {
    std::vector<Contour> contours;
    if (edges.empty()) return contours;

    const int w = edges.width();
    const int h = edges.height();
    std::vector<uint8_t> visited(static_cast<size_t>(w) * h, 0);

    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            const size_t idx = static_cast<size_t>(y) * w + x;
            if (!edges.at(x, y) || visited[idx]) continue;

            // First raster-order pixel of a fresh component: trace its border,
            // then flood the component so it is not traced again.
            contours.push_back(trace_boundary(edges, x, y));

            std::queue<std::pair<int, int>> q;
            q.emplace(x, y);
            visited[idx] = 1;
            while (!q.empty()) {
                auto [px, py] = q.front();
                q.pop();
                for (const auto& [dx, dy] : kRing) {
                    const int nx = px + dx;
                    const int ny = py + dy;
                    if (!edges.in_bounds(nx, ny) || !edges.at(nx, ny)) continue;
                    const size_t ni = static_cast<size_t>(ny) * w + nx;
                    if (!visited[ni]) {
                        visited[ni] = 1;
                        q.emplace(nx, ny);
                    }
                }
            }
        }
    }
    return contours;
}

int count_sunspots(const std::vector<Contour>& contours, size_t min_perimeter) {
    int n = 0;
    for (const auto& c : contours)
        if (c.perimeter() >= min_perimeter) ++n;
    return n;
}

} // namespace stormcast
