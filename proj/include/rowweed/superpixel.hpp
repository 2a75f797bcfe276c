#pragma once

#include <array>
#include <vector>

#include "rowweed/raster.hpp"
#include "rowweed/rowdetect.hpp"

namespace rowweed {

struct LabColor {
    double l = 0.0;
    double a = 0.0;
    double b = 0.0;
};

/// sRGB (D65, standard piecewise companding) to CIELAB, 8-bit channel inputs.
LabColor srgb_to_lab(std::uint8_t r, std::uint8_t g, std::uint8_t b);

/// CIELAB back to 8-bit sRGB, gamut-clamped.
std::array<std::uint8_t, 3> lab_to_srgb(const LabColor& lab);

/// Planar Lab image.
struct LabImage {
    int width = 0;
    int height = 0;
    std::vector<double> l, a, b;

    LabImage() = default;
    LabImage(int w, int h)
        : width(w),
          height(h),
          l(static_cast<std::size_t>(w) * h),
          a(static_cast<std::size_t>(w) * h),
          b(static_cast<std::size_t>(w) * h) {}
    std::size_t index(int x, int y) const { return static_cast<std::size_t>(y) * width + x; }
};

LabImage rgb_to_lab(const RgbImage& img);

struct SlicConfig {
    double count_fraction = 0.001;  // superpixels per pixel of image area
    double compactness = 20.0;
    int iterations = 10;
    bool enforce_connectivity = true;
};

struct SuperpixelRegion {
    int id = 0;
    int pixel_count = 0;
    double centroid_x = 0.0;
    double centroid_y = 0.0;
    LabColor mean_color;
};

struct SuperpixelMap {
    int width = 0;
    int height = 0;
    std::vector<std::int32_t> labels;  // region id per pixel, 0..K-1
    std::vector<SuperpixelRegion> regions;

    std::int32_t at(int x, int y) const { return labels[static_cast<std::size_t>(y) * width + x]; }
    int region_count() const { return static_cast<int>(regions.size()); }
};

/// SLIC: grid-seeded local k-means in (L, a, b, x, y) with distance
/// sqrt(d_lab^2 + (d_xy / S)^2 * m^2), ties to the lowest center id.
SuperpixelMap slic(const RgbImage& img, const SlicConfig& cfg);

/// Region ids crossed by the rasterized line (1 px Bresenham trace through
/// the image rectangle). A line that misses the image yields an empty set.
std::vector<int> superpixels_on_line(const SuperpixelMap& sp, const PolarLine& line);

/// Pixels of the 1-px trace itself; shared by the crossing test and overlays.
std::vector<PixelCoord> trace_line(const PolarLine& line, int width, int height);

}  // namespace rowweed
