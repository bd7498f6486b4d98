#pragma once

#include <filesystem>
#include <string>

#include "stormcast/raster.hpp"

namespace stormcast {

inline constexpr int kWorkingSize = 1024; // gradient thresholds assume this size

// Decodes PNG or JPEG (sniffed by magic bytes, not extension). Color inputs
// collapse to luma 0.299R + 0.587G + 0.114B; anything not already at the
// working size is resampled by area-weighted averaging.
GrayImage load_image(const std::filesystem::path& path, int working_size = kWorkingSize);

// Decode from an in-memory buffer (same pipeline as load_image).
GrayImage decode_image(const std::string& bytes, const std::string& origin,
                       int working_size = kWorkingSize);

// Exact area average of the source over each destination pixel's footprint.
GrayImage resample_area(const GrayImage& img, int out_width, int out_height);

// Grayscale writers for debug dumps and generated fixtures. Values are
// clamped to [0, 255] and rounded.
void write_png(const std::filesystem::path& path, const GrayImage& img);
void write_pgm(const std::filesystem::path& path, const GrayImage& img);
GrayImage read_pgm(const std::filesystem::path& path);

// Writes mag-style rasters scaled so the maximum maps to 255 (all-zero stays black).
void write_png_normalized(const std::filesystem::path& path, const GrayImage& img);

void write_png(const std::filesystem::path& path, const BinaryImage& img);

} // namespace stormcast
