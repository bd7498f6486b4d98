#include "stormcast/canny.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "stormcast/errors.hpp"

namespace stormcast {

void CannyParams::validate() const {
    if (smoothing_sigma <= 0.0)
        throw std::invalid_argument("smoothing_sigma must be > 0");
    if (!(low_threshold > 0.0) || low_threshold > high_threshold)
        throw std::invalid_argument("thresholds must satisfy 0 < low <= high");
    if (disk_margin_fraction < 0.0 || disk_margin_fraction >= 1.0)
        throw std::invalid_argument("disk_margin_fraction must be in [0, 1)");
}

GrayImage gaussian_smooth(const GrayImage& img, double sigma) {
    if (sigma <= 0.0) throw std::invalid_argument("sigma must be > 0");
    if (img.empty()) throw DataError("empty image");

    const int radius = static_cast<int>(std::ceil(3.0 * sigma));
    const int k = 2 * radius + 1;
    std::vector<double> kernel(static_cast<size_t>(k) * k);
    double sum = 0.0;
    for (int dy = -radius; dy <= radius; ++dy) {
        for (int dx = -radius; dx <= radius; ++dx) {
            double w = std::exp(-(dx * dx + dy * dy) / (2.0 * sigma * sigma));
            kernel[static_cast<size_t>(dy + radius) * k + (dx + radius)] = w;
            sum += w;
        }
    }
    for (auto& w : kernel) w /= sum;

    GrayImage out(img.width(), img.height());
    for (int y = 0; y < img.height(); ++y) {
        for (int x = 0; x < img.width(); ++x) {
            double acc = 0.0;
            for (int dy = -radius; dy <= radius; ++dy)
                for (int dx = -radius; dx <= radius; ++dx)
                    acc += kernel[static_cast<size_t>(dy + radius) * k + (dx + radius)] *
                           img.at_clamped(x + dx, y + dy);
            out.at(x, y) = acc;
        }
    }
    return out;
}

namespace {

constexpr double kHalfPi = std::numbers::pi / 2.0;

// Fold an atan2 angle into (-pi/2, pi/2]: opposite gradients are one orientation.
double fold_direction(double theta) {
    if (theta <= -kHalfPi) theta += std::numbers::pi;
    else if (theta > kHalfPi) theta -= std::numbers::pi;
    return theta;
}

} // namespace

GradientField sobel_gradient(const GrayImage& img) {
    if (img.width() < 3 || img.height() < 3)
        throw std::invalid_argument("image smaller than 3x3 Sobel kernel");

    GradientField g;
    g.width = img.width();
    g.height = img.height();
    g.magnitude.resize(img.size());
    g.direction.resize(img.size());

    for (int y = 0; y < img.height(); ++y) {
        for (int x = 0; x < img.width(); ++x) {
            const double p00 = img.at_clamped(x - 1, y - 1);
            const double p10 = img.at_clamped(x, y - 1);
            const double p20 = img.at_clamped(x + 1, y - 1);
            const double p01 = img.at_clamped(x - 1, y);
            const double p21 = img.at_clamped(x + 1, y);
            const double p02 = img.at_clamped(x - 1, y + 1);
            const double p12 = img.at_clamped(x, y + 1);
            const double p22 = img.at_clamped(x + 1, y + 1);

            const double gx = (p20 + 2.0 * p21 + p22) - (p00 + 2.0 * p01 + p02);
            const double gy = (p02 + 2.0 * p12 + p22) - (p00 + 2.0 * p10 + p20);

            const size_t i = static_cast<size_t>(y) * img.width() + x;
            g.magnitude[i] = std::sqrt(gx * gx + gy * gy);
            g.direction[i] = (gx == 0.0 && gy == 0.0) ? 0.0
                                                      : fold_direction(std::atan2(gy, gx));
        }
    }
    return g;
}

GrayImage nonmax_suppress(const GradientField& g) {
    if (g.width <= 0 || g.height <= 0) throw DataError("empty gradient field");

    // Neighbor offsets per quantized orientation: 0, 45, 90, 135 degrees.
    static constexpr std::array<std::array<int, 2>, 4> offsets{{
        {{1, 0}}, {{1, 1}}, {{0, 1}}, {{1, -1}},
    }};
    constexpr double kSector = std::numbers::pi / 8.0; // 22.5 degrees

    GrayImage out(g.width, g.height);
    for (int y = 0; y < g.height; ++y) {
        for (int x = 0; x < g.width; ++x) {
            const double theta = g.dir_at(x, y);
            int sector;
            if (theta >= -kSector && theta < kSector) sector = 0;
            else if (theta >= kSector && theta < 3 * kSector) sector = 1;
            else if (theta >= 3 * kSector || theta < -3 * kSector) sector = 2;
            else sector = 3;

            const auto [dx, dy] = offsets[static_cast<size_t>(sector)];
            const double m = g.mag_at(x, y);
            if (m >= g.mag_clamped(x + dx, y + dy) && m >= g.mag_clamped(x - dx, y - dy))
                out.at(x, y) = m;
        }
    }
    return out;
}

BinaryImage hysteresis_threshold(const GrayImage& mag, double low, double high) {
    if (!(low > 0.0) || low > high)
        throw std::invalid_argument("thresholds must satisfy 0 < low <= high");
    if (mag.empty()) throw DataError("empty image");

    const int w = mag.width();
    const int h = mag.height();
    BinaryImage out(w, h);

    std::vector<std::pair<int, int>> stack;
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x)
            if (mag.at(x, y) >= high) {
                out.set(x, y, true);
                stack.emplace_back(x, y);
            }

    while (!stack.empty()) {
        auto [x, y] = stack.back();
        stack.pop_back();
        for (int dy = -1; dy <= 1; ++dy) {
            for (int dx = -1; dx <= 1; ++dx) {
                if (dx == 0 && dy == 0) continue;
                const int nx = x + dx;
                const int ny = y + dy;
                if (!out.in_bounds(nx, ny) || out.at(nx, ny)) continue;
                if (mag.at(nx, ny) >= low) {
                    out.set(nx, ny, true);
                    stack.emplace_back(nx, ny);
                }
            }
        }
    }
    return out;
}

double otsu_threshold(const GrayImage& img) {
    std::array<int64_t, 256> hist{};
    for (double v : img.pixels()) {
        int bin = static_cast<int>(std::lround(std::clamp(v, 0.0, 255.0)));
        ++hist[static_cast<size_t>(bin)];
    }

    const double total = static_cast<double>(img.size());
    double sum_all = 0.0;
    for (int i = 0; i < 256; ++i) sum_all += i * double(hist[size_t(i)]);

    double best = -1.0;
    int best_t = 0;
    double w0 = 0.0, sum0 = 0.0;
    for (int t = 0; t < 255; ++t) {
        w0 += double(hist[size_t(t)]);
        if (w0 == 0.0) continue;
        const double w1 = total - w0;
        if (w1 == 0.0) break;
        sum0 += t * double(hist[size_t(t)]);
        const double mu0 = sum0 / w0;
        const double mu1 = (sum_all - sum0) / w1;
        const double between_var = w0 * w1 * (mu0 - mu1) * (mu0 - mu1);
        if (between_var > best) {
            best = between_var;
            best_t = t;
        }
    }
    return static_cast<double>(best_t);
}

DiskGeometry solar_disk_mask(const GrayImage& img) {
    if (img.empty()) throw DataError("empty image");
    double lo = img.pixels()[0], hi = img.pixels()[0];
    for (double v : img.pixels()) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    if (hi - lo < 50.0) throw DataError("no solar disk detected");

    const double t = otsu_threshold(img);
    double sx = 0.0, sy = 0.0;
    int64_t n = 0;
    for (int y = 0; y < img.height(); ++y)
        for (int x = 0; x < img.width(); ++x)
            if (img.at(x, y) > t) {
                sx += x;
                sy += y;
                ++n;
            }
    if (n == 0) throw DataError("no solar disk detected");

    DiskGeometry disk;
    disk.center_x = sx / double(n);
    disk.center_y = sy / double(n);
    disk.radius = std::sqrt(double(n) / std::numbers::pi);
    return disk;
}

BinaryImage canny(const GrayImage& img, const CannyParams& params, CannyStages* stages) {
    params.validate();
    if (img.empty()) throw DataError("empty image");

    // A contrast-free frame (uniform test images) simply has no limb to mask;
    // callers that require a disk check for one explicitly.
    bool have_disk = true;
    DiskGeometry disk;
    try {
        disk = solar_disk_mask(img);
    } catch (const DataError&) {
        have_disk = false;
    }

    GrayImage smoothed = gaussian_smooth(img, params.smoothing_sigma);
    GradientField grad = sobel_gradient(smoothed);
    GrayImage suppressed = nonmax_suppress(grad);
    BinaryImage edges =
        hysteresis_threshold(suppressed, params.low_threshold, params.high_threshold);

    if (stages) {
        stages->smoothed = smoothed;
        GrayImage mag(grad.width, grad.height);
        mag.pixels() = grad.magnitude;
        stages->magnitude = std::move(mag);
        stages->suppressed = suppressed;
        stages->edges_unmasked = edges;
        stages->disk = disk;
    }
    if (!have_disk) return edges;

    // Limb masking: the disk boundary is itself a massive circular edge.
    const double keep_r = disk.radius * (1.0 - params.disk_margin_fraction);
    const double keep_r2 = keep_r * keep_r;
    for (int y = 0; y < edges.height(); ++y) {
        for (int x = 0; x < edges.width(); ++x) {
            if (!edges.at(x, y)) continue;
            const double dx = x - disk.center_x;
            const double dy = y - disk.center_y;
            if (dx * dx + dy * dy >= keep_r2) edges.set(x, y, false);
        }
    }
    return edges;
}

} // namespace stormcast
