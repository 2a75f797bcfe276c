#pragma once

#include <span>
#include <vector>

#include "rowweed/raster.hpp"

namespace rowweed {

struct HoughConfig {
    double theta_res_deg = 0.1;
    double rho_res_px = 1.0;
    double norm_threshold = 0.1;   // fill-ratio cutoff for accepting peaks
    double angle_gate_deg = 20.0;  // max deviation from the main field orientation
    double support_band_px = 10.0; // perpendicular reach when recovering a line's pixels

    friend bool operator==(const HoughConfig&, const HoughConfig&) = default;
};

/// Discretized (theta, rho) vote space. Theta bin centers are
/// -90 + (i+1)*theta_res for i in [0, theta_bins), covering (-90, 90];
/// rho bin centers are -rho_max + j*rho_res with rho_max = ceil(image diagonal).
///
/// Votes are unit counts, so float storage is exact (counts stay far below 2^24).
struct HoughAccumulator {
    int theta_bins = 0;
    int rho_bins = 0;
    double theta_res_deg = 0.0;
    double rho_res_px = 0.0;
    double rho_max = 0.0;
    std::vector<float> votes;  // theta-major: votes[t * rho_bins + r]

    float at(int t, int r) const { return votes[static_cast<std::size_t>(t) * rho_bins + r]; }
    float& at(int t, int r) { return votes[static_cast<std::size_t>(t) * rho_bins + r]; }
    double theta_deg(int t) const { return -90.0 + (t + 1) * theta_res_deg; }
    double rho_px(int r) const { return -rho_max + r * rho_res_px; }
    int rho_index(double rho) const {
        return static_cast<int>(std::lround((rho + rho_max) / rho_res_px));
    }
    bool same_shape(const HoughAccumulator& o) const {
        return theta_bins == o.theta_bins && rho_bins == o.rho_bins;
    }
};

HoughAccumulator make_accumulator(int width, int height, const HoughConfig& cfg);

HoughAccumulator hough_transform(std::span<const PixelCoord> points, const HoughConfig& cfg,
                                 int width, int height);

/// Accumulator of a fully set image of the given size.
HoughAccumulator hough_ones(int width, int height, const HoughConfig& cfg);

/// Process-wide cache for hough_ones keyed by (dims, resolutions); the pipeline
/// reuses one entry across every image of the same size.
const HoughAccumulator& hough_ones_cached(int width, int height, const HoughConfig& cfg);

/// Elementwise H / H1; bins with zero reference coverage map to 0.
HoughAccumulator normalize(const HoughAccumulator& h, const HoughAccumulator& h_ones);

/// Mode of the pixel-count-weighted component orientation histogram (1 degree
/// bins centered on integer degrees). Throws EmptySkeletonError.
double main_orientation(const Skeleton& sk);

struct DetectedLine {
    double theta_deg = 0.0;  // normal angle, (-90, 90]
    double rho_px = 0.0;
    double score = 0.0;      // normalized peak value at extraction time
    std::vector<int> supporting_component_ids;
    std::vector<std::uint32_t> supporting_pixel_indices;  // into Skeleton::all_pixels()

    PolarLine polar() const { return {theta_deg, rho_px}; }
};

/// Iterative peak extraction: take the global maximum of the normalized
/// accumulator, recover the skeleton pixels within the support band of that
/// line, subtract their normalized votes, and keep the line when its angle
/// stays within the gate around the main orientation. Stops when the maximum
/// falls to the threshold.
std::vector<DetectedLine> detect_crop_lines(const Skeleton& sk, const HoughConfig& cfg,
                                            int width, int height);

}  // namespace rowweed
