#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <stdexcept>

namespace oracle {

GrayImage conv2d_replicate(const GrayImage& img, const std::vector<double>& kernel, int radius) {
    const int k = 2 * radius + 1;
    if (kernel.size() != static_cast<size_t>(k) * k)
        throw std::invalid_argument("kernel size mismatch");

    GrayImage out(img.width(), img.height());
    for (int y = 0; y < img.height(); ++y) {
        for (int x = 0; x < img.width(); ++x) {
            double acc = 0.0;
            for (int dy = -radius; dy <= radius; ++dy) {
                for (int dx = -radius; dx <= radius; ++dx) {
                    const int sx = std::clamp(x + dx, 0, img.width() - 1);
                    const int sy = std::clamp(y + dy, 0, img.height() - 1);
                    acc += kernel[size_t(dy + radius) * k + size_t(dx + radius)] * img.at(sx, sy);
                }
            }
            out.at(x, y) = acc;
        }
    }
    return out;
}

std::vector<double> gaussian_kernel(double sigma, int& radius) {
    radius = static_cast<int>(std::ceil(3.0 * sigma));
    const int k = 2 * radius + 1;
    std::vector<double> kernel(static_cast<size_t>(k) * k);
    double sum = 0.0;
    for (int dy = -radius; dy <= radius; ++dy)
        for (int dx = -radius; dx <= radius; ++dx) {
            const double w = std::exp(-(dx * dx + dy * dy) / (2.0 * sigma * sigma));
            kernel[size_t(dy + radius) * k + size_t(dx + radius)] = w;
            sum += w;
        }
    for (auto& w : kernel) w /= sum;
    return kernel;
}

void sobel_direct(const GrayImage& img, GrayImage& magnitude, GrayImage& direction) {
    static const int kx[3][3] = {{-1, 0, 1}, {-2, 0, 2}, {-1, 0, 1}};
    static const int ky[3][3] = {{-1, -2, -1}, {0, 0, 0}, {1, 2, 1}};

    magnitude = GrayImage(img.width(), img.height());
    direction = GrayImage(img.width(), img.height());
    for (int y = 0; y < img.height(); ++y) {
        for (int x = 0; x < img.width(); ++x) {
            double gx = 0.0, gy = 0.0;
            for (int j = 0; j < 3; ++j) {
                for (int i = 0; i < 3; ++i) {
                    const int sx = std::clamp(x + i - 1, 0, img.width() - 1);
                    const int sy = std::clamp(y + j - 1, 0, img.height() - 1);
                    gx += kx[j][i] * img.at(sx, sy);
                    gy += ky[j][i] * img.at(sx, sy);
                }
            }
            magnitude.at(x, y) = std::hypot(gx, gy);
            double theta = (gx == 0.0 && gy == 0.0) ? 0.0 : std::atan2(gy, gx);
            if (theta <= -std::numbers::pi / 2) theta += std::numbers::pi;
            if (theta > std::numbers::pi / 2) theta -= std::numbers::pi;
            direction.at(x, y) = theta;
        }
    }
}

BinaryImage hysteresis_fixed_point(const GrayImage& mag, double low, double high) {
    const int w = mag.width();
    const int h = mag.height();
    BinaryImage out(w, h);
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x)
            if (mag.at(x, y) >= high) out.set(x, y, true);

    bool changed = true;
    while (changed) {
        changed = false;
        for (int y = 0; y < h; ++y) {
            for (int x = 0; x < w; ++x) {
                if (out.at(x, y) || mag.at(x, y) < low) continue;
                bool near_marked = false;
                for (int dy = -1; dy <= 1 && !near_marked; ++dy)
                    for (int dx = -1; dx <= 1 && !near_marked; ++dx) {
                        if (dx == 0 && dy == 0) continue;
                        const int nx = x + dx, ny = y + dy;
                        if (nx >= 0 && nx < w && ny >= 0 && ny < h && out.at(nx, ny))
                            near_marked = true;
                    }
                if (near_marked) {
                    out.set(x, y, true);
                    changed = true;
                }
            }
        }
    }
    return out;
}

namespace {

int uf_find(std::vector<int>& parent, int a) {
    while (parent[size_t(a)] != a) {
        parent[size_t(a)] = parent[size_t(parent[size_t(a)])];
        a = parent[size_t(a)];
    }
    return a;
}

void uf_union(std::vector<int>& parent, int a, int b) {
    parent[size_t(uf_find(parent, a))] = uf_find(parent, b);
}

} // namespace

int component_count_union_find(const BinaryImage& img) {
    const int w = img.width();
    const int h = img.height();
    std::vector<int> parent(static_cast<size_t>(w) * h);
    std::iota(parent.begin(), parent.end(), 0);

    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) {
            if (!img.at(x, y)) continue;
            for (int dy = -1; dy <= 1; ++dy)
                for (int dx = -1; dx <= 1; ++dx) {
                    const int nx = x + dx, ny = y + dy;
                    if ((dx || dy) && nx >= 0 && nx < w && ny >= 0 && ny < h && img.at(nx, ny))
                        uf_union(parent, y * w + x, ny * w + nx);
                }
        }

    int count = 0;
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x)
            if (img.at(x, y) && uf_find(parent, y * w + x) == y * w + x) ++count;
    return count;
}

DbscanReference dbscan_reference(const std::vector<Point2D>& pts, double eps, int min_pts) {
    const size_t n = pts.size();
    DbscanReference ref;
    ref.core.assign(n, false);
    ref.labels.assign(n, -1);

    // closed-ball neighborhoods, exhaustively
    std::vector<std::vector<int>> nbr(n);
    for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < n; ++j) {
            const double dx = pts[i].x - pts[j].x;
            const double dy = pts[i].y - pts[j].y;
            if (std::sqrt(dx * dx + dy * dy) <= eps) nbr[i].push_back(int(j));
        }
    for (size_t i = 0; i < n; ++i) ref.core[i] = nbr[i].size() >= size_t(min_pts);

    // connected components of the core graph (cores adjacent iff within eps)
    std::vector<int> comp(n, -1);
    int n_comp = 0;
    for (size_t i = 0; i < n; ++i) {
        if (!ref.core[i] || comp[i] != -1) continue;
        std::vector<size_t> stack{i};
        comp[i] = n_comp;
        while (!stack.empty()) {
            const size_t p = stack.back();
            stack.pop_back();
            for (int q : nbr[p])
                if (ref.core[size_t(q)] && comp[size_t(q)] == -1) {
                    comp[size_t(q)] = n_comp;
                    stack.push_back(size_t(q));
                }
        }
        ++n_comp;
    }
    ref.n_clusters = n_comp;

    for (size_t i = 0; i < n; ++i) {
        if (ref.core[i]) {
            ref.labels[i] = comp[i];
        } else {
            // border point: attached to the first core (input order) covering it
            for (int q : nbr[i])
                if (ref.core[size_t(q)]) {
                    ref.labels[i] = comp[size_t(q)];
                    break;
                }
        }
    }
    return ref;
}

std::vector<std::vector<int>> knn_reference(const std::vector<std::vector<double>>& pts, int k) {
    std::vector<std::vector<int>> out(pts.size());
    for (size_t i = 0; i < pts.size(); ++i) {
        std::vector<std::pair<double, int>> d;
        for (size_t j = 0; j < pts.size(); ++j) {
            if (i == j) continue;
            double s = 0.0;
            for (size_t f = 0; f < pts[i].size(); ++f) {
                const double diff = pts[i][f] - pts[j][f];
                s += diff * diff;
            }
            d.emplace_back(s, int(j));
        }
        std::sort(d.begin(), d.end());
        for (int j = 0; j < k && j < int(d.size()); ++j) out[i].push_back(d[size_t(j)].second);
    }
    return out;
}

double pearson_reference(const std::vector<double>& x, const std::vector<double>& y) {
    const size_t n = x.size();
    double mx = 0.0, my = 0.0;
    for (size_t i = 0; i < n; ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= double(n);
    my /= double(n);
    double num = 0.0, dx2 = 0.0, dy2 = 0.0;
    for (size_t i = 0; i < n; ++i) {
        num += (x[i] - mx) * (y[i] - my);
        dx2 += (x[i] - mx) * (x[i] - mx);
        dy2 += (y[i] - my) * (y[i] - my);
    }
    return num / std::sqrt(dx2 * dy2);
}

double auc_mann_whitney(const std::vector<double>& scores, const std::vector<StormClass>& labels) {
    double concordant = 0.0, ties = 0.0;
    long n_pos = 0, n_neg = 0;
    for (size_t i = 0; i < scores.size(); ++i) {
        if (labels[i] != StormClass::storm) continue;
        ++n_pos;
        for (size_t j = 0; j < scores.size(); ++j) {
            if (labels[j] == StormClass::storm) continue;
            if (scores[i] > scores[j]) concordant += 1.0;
            else if (scores[i] == scores[j]) ties += 1.0;
        }
    }
    for (auto l : labels)
        if (l != StormClass::storm) ++n_neg;
    return (concordant + 0.5 * ties) / (double(n_pos) * double(n_neg));
}

} // namespace oracle
