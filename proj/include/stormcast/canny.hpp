#pragma once

#include "stormcast/raster.hpp"

namespace stormcast {

struct CannyParams {
    double smoothing_sigma = 1.4;
    double low_threshold = 300.0;   // hysteresis minimum; rejects inactive-region borders
    double high_threshold = 600.0;  // 2x low by default
    double disk_margin_fraction = 0.02;

    void validate() const; // throws std::invalid_argument
};

// Circle fit of the bright solar disk: centroid + equivalent-area radius.
struct DiskGeometry {
    double center_x = 0.0;
    double center_y = 0.0;
    double radius = 0.0;
};

// Intermediate stages, filled when a caller wants debug dumps.
struct CannyStages {
    GrayImage smoothed;
    GrayImage magnitude;
    GrayImage suppressed;
    BinaryImage edges_unmasked;
    DiskGeometry disk;
};

// Convolution with a normalized 2-D Gaussian kernel, radius ceil(3*sigma),
// borders edge-replicated. Preserves constant images.
GrayImage gaussian_smooth(const GrayImage& img, double sigma);

// 3x3 Sobel responses; magnitude = sqrt(Gx^2 + Gy^2), direction folded into
// (-pi/2, pi/2]. Requires at least a 3x3 image.
GradientField sobel_gradient(const GrayImage& img);

// Keeps a pixel iff its magnitude is >= both neighbors along the quantized
// gradient direction (0/45/90/135 degrees). The >= tie rule lets plateaus
// survive as one-pixel lines.
GrayImage nonmax_suppress(const GradientField& g);

// Strong pixels (mag >= high) seed a flood over weak pixels (mag >= low)
// with 8-connectivity.
BinaryImage hysteresis_threshold(const GrayImage& mag, double low, double high);

// Histogram threshold maximizing between-class variance; foreground is > t.
double otsu_threshold(const GrayImage& img);

// Locates the bright disk: centroid of above-Otsu pixels, radius from area.
// Throws DataError("no solar disk detected") when contrast < 50.
DiskGeometry solar_disk_mask(const GrayImage& img);

// Full chain: smooth -> gradient -> suppress -> hysteresis, then clears every
// edge pixel at distance >= radius * (1 - disk_margin_fraction) from the disk
// center, removing the limb and anything outside the disk. When no disk is
// detectable (contrast-free frames) the unmasked edge map is returned;
// extract_features requires the disk and propagates the failure instead.
BinaryImage canny(const GrayImage& img, const CannyParams& params,
                  CannyStages* stages = nullptr);

} // namespace stormcast
