#pragma once

#include <string>
#include <utility>
#include <vector>

#include "rowweed/raster.hpp"
#include "rowweed/superpixel.hpp"

namespace rowweed {

struct ColorDistribution {
    LabColor mean;
    LabColor sigma;
};

/// Declarative description of a synthetic row-crop field. Orientation is the
/// direction of the rows; truth lines are stored in normal form like every
/// other line in the project.
struct FieldSpec {
    int width = 1024;
    int height = 1024;
    std::uint64_t seed = 0;

    double row_orientation_deg = 0.0;
    int row_count = 8;               // requested; rows that do not fit are dropped
    double row_spacing_px = 125.0;
    double row_spacing_jitter_px = 6.0;
    double row_width_px = 22.0;      // transverse extent of the planted band

    double plant_radius_px = 9.0;
    double plant_radius_jitter = 0.25;  // fraction of the radius
    double plant_spacing_px = 14.0;     // blob centers along the row

    ColorDistribution crop_color;
    ColorDistribution weed_color;

    // Blob counts are densities per 10^4 px^2 of image area.
    double interline_weed_density = 0.10;  // well clear of the rows
    double nearrow_weed_density = 0.0;     // just outside the planted band
    double intra_row_weed_density = 0.0;   // overlapping the planted band
    double weed_radius_px = 8.0;
    double weed_radius_jitter = 0.3;

    std::uint8_t soil_r = 112, soil_g = 86, soil_b = 60;
    double soil_noise = 9.0;
};

struct WeedBlob {
    double centroid_x = 0.0;
    double centroid_y = 0.0;
    int bbox_x0 = 0, bbox_y0 = 0, bbox_x1 = 0, bbox_y1 = 0;  // inclusive
    int pixel_count = 0;
    bool interline = false;
};

struct FieldGroundTruth {
    PixelClassMap classes;             // background = soil
    std::vector<PolarLine> row_lines;  // actually rendered rows
    std::vector<WeedBlob> weeds;
};

/// Renders the field described by the spec. Deterministic under the seed;
/// the ground truth is exact by construction. Throws InvalidSpecError.
std::pair<RgbImage, FieldGroundTruth> generate(const FieldSpec& spec);

/// Named field archetypes: "bean_like" (sparse plants, stable spacing, weeds
/// scattered near the rows) and "spinach_like" (dense rows, irregular spacing,
/// many interline weeds). Throws UnknownPresetError.
FieldSpec preset(const std::string& name);

/// Ground-truth-labeled 64x64 evaluation patches: one weed patch per weed
/// blob, crop patches sampled along the truth lines. Used to score trained
/// classifiers against an independently labeled hold-out.
struct GroundTruthPatch {
    RgbImage pixels;
    bool is_weed = false;
    int x = 0, y = 0;  // window top-left
};

std::vector<GroundTruthPatch> extract_ground_truth_patches(const RgbImage& img,
                                                           const FieldGroundTruth& truth,
                                                           int window = 64, int stride = 48);

}  // namespace rowweed
