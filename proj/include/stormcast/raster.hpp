#pragma once

#include <algorithm>
#include <cstdint>
#include <stdexcept>
#include <vector>

namespace stormcast {

// Row-major raster of real values. Pixel (x, y) lives at y * width + x.
// Decoded 8-bit images carry intensities in [0, 255]; intermediate stages
// (gradient magnitudes) may exceed that range.
class GrayImage {
public:
    GrayImage() = default;
    GrayImage(int width, int height, double fill = 0.0)
        : width_(width), height_(height),
          pixels_(static_cast<size_t>(check_dims(width, height)) , fill) {}

    int width() const { return width_; }
    int height() const { return height_; }
    bool empty() const { return pixels_.empty(); }
    size_t size() const { return pixels_.size(); }

    double& at(int x, int y) { return pixels_[index(x, y)]; }
    double at(int x, int y) const { return pixels_[index(x, y)]; }

    // Edge-replicated access, used by every convolution-style pass.
    double at_clamped(int x, int y) const {
        x = std::clamp(x, 0, width_ - 1);
        y = std::clamp(y, 0, height_ - 1);
        return pixels_[index(x, y)];
    }

    std::vector<double>& pixels() { return pixels_; }
    const std::vector<double>& pixels() const { return pixels_; }

private:
    static size_t check_dims(int w, int h) {
        if (w < 0 || h < 0)
            throw std::invalid_argument("negative image dimensions");
        return static_cast<size_t>(w) * static_cast<size_t>(h);
    }
    size_t index(int x, int y) const {
        return static_cast<size_t>(y) * static_cast<size_t>(width_) + static_cast<size_t>(x);
    }

    int width_ = 0;
    int height_ = 0;
    std::vector<double> pixels_;
};

// Per-pixel boolean raster (true = edge / foreground).
class BinaryImage {
public:
    BinaryImage() = default;
    BinaryImage(int width, int height, bool fill = false)
        : width_(width), height_(height),
          bits_(static_cast<size_t>(width) * static_cast<size_t>(height), fill ? 1 : 0) {
        if (width < 0 || height < 0)
            throw std::invalid_argument("negative image dimensions");
    }

    int width() const { return width_; }
    int height() const { return height_; }
    bool empty() const { return bits_.empty(); }

    bool at(int x, int y) const { return bits_[index(x, y)] != 0; }
    void set(int x, int y, bool v) { bits_[index(x, y)] = v ? 1 : 0; }

    bool in_bounds(int x, int y) const {
        return x >= 0 && x < width_ && y >= 0 && y < height_;
    }

    size_t count() const {
        size_t n = 0;
        for (auto b : bits_) n += b;
        return n;
    }

    const std::vector<uint8_t>& bits() const { return bits_; }

    bool operator==(const BinaryImage& o) const {
        return width_ == o.width_ && height_ == o.height_ && bits_ == o.bits_;
    }

private:
    size_t index(int x, int y) const {
        return static_cast<size_t>(y) * static_cast<size_t>(width_) + static_cast<size_t>(x);
    }

    int width_ = 0;
    int height_ = 0;
    std::vector<uint8_t> bits_;
};

// Per-pixel gradient magnitude and direction. Directions are folded into
// (-pi/2, pi/2] so that opposite gradients share one orientation.
struct GradientField {
    int width = 0;
    int height = 0;
    std::vector<double> magnitude;
    std::vector<double> direction;

    double mag_at(int x, int y) const {
        return magnitude[static_cast<size_t>(y) * width + x];
    }
    double dir_at(int x, int y) const {
        return direction[static_cast<size_t>(y) * width + x];
    }
    double mag_clamped(int x, int y) const {
        x = std::clamp(x, 0, width - 1);
        y = std::clamp(y, 0, height - 1);
        return magnitude[static_cast<size_t>(y) * width + x];
    }
};

} // namespace stormcast
