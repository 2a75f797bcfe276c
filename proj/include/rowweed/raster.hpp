#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "rowweed/common.hpp"
#include "rowweed/errors.hpp"

namespace rowweed {

/// 8-bit RGB image, row-major interleaved triplets.
struct RgbImage {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> data;  // 3 * width * height

    RgbImage() = default;
    RgbImage(int w, int h) : width(w), height(h), data(static_cast<std::size_t>(w) * h * 3, 0) {}

    std::uint8_t* px(int x, int y) { return data.data() + 3 * (static_cast<std::size_t>(y) * width + x); }
    const std::uint8_t* px(int x, int y) const {
        return data.data() + 3 * (static_cast<std::size_t>(y) * width + x);
    }
    void set(int x, int y, std::uint8_t r, std::uint8_t g, std::uint8_t b) {
        auto* p = px(x, y);
        p[0] = r;
        p[1] = g;
        p[2] = b;
    }
    bool in_bounds(int x, int y) const { return x >= 0 && x < width && y >= 0 && y < height; }
    std::size_t pixel_count() const { return static_cast<std::size_t>(width) * height; }
};

/// Real-valued single plane (holds ExG values and the like).
struct GrayPlane {
    int width = 0;
    int height = 0;
    std::vector<double> data;

    GrayPlane() = default;
    GrayPlane(int w, int h) : width(w), height(h), data(static_cast<std::size_t>(w) * h, 0.0) {}

    double& at(int x, int y) { return data[static_cast<std::size_t>(y) * width + x]; }
    double at(int x, int y) const { return data[static_cast<std::size_t>(y) * width + x]; }
};

/// Per-pixel boolean mask stored one byte per pixel (0/1).
struct BinaryMask {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> bits;

    BinaryMask() = default;
    BinaryMask(int w, int h) : width(w), height(h), bits(static_cast<std::size_t>(w) * h, 0) {}

    bool test(int x, int y) const { return bits[static_cast<std::size_t>(y) * width + x] != 0; }
    void set(int x, int y, bool v) { bits[static_cast<std::size_t>(y) * width + x] = v ? 1 : 0; }
    bool in_bounds(int x, int y) const { return x >= 0 && x < width && y >= 0 && y < height; }
    std::size_t count() const;
    bool same_dims(int w, int h) const { return width == w && height == h; }
};

/// Connected-component labels, 0 = background, components numbered 1..count
/// in raster-scan first-encounter order.
struct LabelMap {
    int width = 0;
    int height = 0;
    std::vector<std::int32_t> labels;
    int count = 0;

    LabelMap() = default;
    LabelMap(int w, int h) : width(w), height(h), labels(static_cast<std::size_t>(w) * h, 0) {}

    std::int32_t at(int x, int y) const { return labels[static_cast<std::size_t>(y) * width + x]; }
    std::int32_t& at(int x, int y) { return labels[static_cast<std::size_t>(y) * width + x]; }
};

enum class PixelClass : std::uint8_t { background = 0, crop = 1, weed = 2 };

/// Final per-pixel decision map; also the layout of synthetic ground truth
/// (background = soil).
struct PixelClassMap {
    int width = 0;
    int height = 0;
    std::vector<PixelClass> classes;

    PixelClassMap() = default;
    PixelClassMap(int w, int h)
        : width(w), height(h), classes(static_cast<std::size_t>(w) * h, PixelClass::background) {}

    PixelClass at(int x, int y) const { return classes[static_cast<std::size_t>(y) * width + x]; }
    PixelClass& at(int x, int y) { return classes[static_cast<std::size_t>(y) * width + x]; }
};

struct SkeletonComponent {
    int id = 0;
    std::vector<PixelCoord> pixels;
    double orientation_deg = 0.0;  // principal axis, (-90, 90]
};

struct Skeleton {
    int width = 0;
    int height = 0;
    std::vector<SkeletonComponent> components;

    bool empty() const { return components.empty(); }
    std::size_t pixel_count() const {
        std::size_t n = 0;
        for (const auto& c : components) n += c.pixels.size();
        return n;
    }
    std::vector<PixelCoord> all_pixels() const;
};

/// Excess-green index on chromaticity-normalized channels. Black maps to 0.
double exg_value(double r, double g, double b);

GrayPlane compute_exg(const RgbImage& img);

/// 256-bin Otsu threshold over [min, max] of the plane; ties break toward the
/// lower threshold. Throws ConstantPlaneError when the plane has one value.
double otsu_threshold(const GrayPlane& plane);

struct SegmentationOptions {
    int open_radius = 0;        // morphological opening after thresholding, 0 = off
    bool empty_is_error = true; // all-background constant plane: throw vs empty mask
};

struct SegmentationResult {
    BinaryMask mask;
    bool degenerate_full = false;  // constant vegetation-like plane, mask forced full
    double threshold = 0.0;
};

SegmentationResult segment_vegetation(const RgbImage& img, const SegmentationOptions& opt = {});

/// Zhang-Suen thinning to 1-px curves, grouped into 8-connected components.
Skeleton skeletonize(const BinaryMask& mask);

/// 8-connected blob coloring, labels in raster-scan first-encounter order.
LabelMap connected_components(const BinaryMask& mask);

/// Principal-axis direction of a pixel cloud, degrees in (-90, 90].
/// Throws DegenerateComponentError for fewer than 2 pixels.
double component_orientation(std::span<const PixelCoord> pixels);

BinaryMask morphological_open(const BinaryMask& mask, int radius);

}  // namespace rowweed
