#pragma once

#include <filesystem>

#include "rowweed/raster.hpp"

namespace rowweed {

/// Reads an 8-bit RGB image; PNG (any color type, expanded to RGB) or PPM P6
/// chosen by file extension. Throws IoError.
RgbImage read_image(const std::filesystem::path& path);

RgbImage read_png_rgb(const std::filesystem::path& path);
RgbImage read_ppm(const std::filesystem::path& path);

void write_png_rgb(const std::filesystem::path& path, const RgbImage& img);

/// Mask written as 8-bit grayscale, 0/255.
void write_png_mask(const std::filesystem::path& path, const BinaryMask& mask);

/// Label map written as 16-bit grayscale (labels clipped at 65535).
void write_png_labels16(const std::filesystem::path& path, const LabelMap& labels);

/// Indexed 8-bit palette PNG; `values` are palette indices, one byte per pixel.
void write_png_indexed(const std::filesystem::path& path, int width, int height,
                       const std::vector<std::uint8_t>& values,
                       const std::vector<std::array<std::uint8_t, 3>>& palette);

/// Reads an indexed or grayscale PNG back as raw per-pixel indices.
std::vector<std::uint8_t> read_png_indices(const std::filesystem::path& path, int& width,
                                           int& height);

}  // namespace rowweed
