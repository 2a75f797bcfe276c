#include "rowweed/raster.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>

namespace rowweed {

std::size_t BinaryMask::count() const {
    return static_cast<std::size_t>(std::count(bits.begin(), bits.end(), std::uint8_t{1}));
}

std::vector<PixelCoord> Skeleton::all_pixels() const {
    std::vector<PixelCoord> out;
    out.reserve(pixel_count());
    for (const auto& c : components) out.insert(out.end(), c.pixels.begin(), c.pixels.end());
    return out;
}

double exg_value(double r, double g, double b) {
    const double s = r + g + b;
    if (s == 0.0) return 0.0;
    return (2.0 * g - r - b) / s;
}

GrayPlane compute_exg(const RgbImage& img) {
    GrayPlane plane(img.width, img.height);
    const std::uint8_t* p = img.data.data();
    for (std::size_t i = 0; i < img.pixel_count(); ++i, p += 3) {
        plane.data[i] = exg_value(p[0], p[1], p[2]);
    }
    return plane;
}

namespace {

constexpr int kOtsuBins = 256;

int bin_of(double v, double lo, double inv_width) {
    const int b = static_cast<int>((v - lo) * inv_width);
    return std::clamp(b, 0, kOtsuBins - 1);
}

}  // namespace

double otsu_threshold(const GrayPlane& plane) {
    const auto [lo_it, hi_it] = std::minmax_element(plane.data.begin(), plane.data.end());
    const double lo = *lo_it;
    const double hi = *hi_it;
    if (lo == hi) throw ConstantPlaneError("otsu_threshold: plane is constant");

    const double bin_width = (hi - lo) / kOtsuBins;
    const double inv_width = kOtsuBins / (hi - lo);
    std::array<std::int64_t, kOtsuBins> hist{};
    for (double v : plane.data) hist[bin_of(v, lo, inv_width)]++;

    const auto total = static_cast<std::int64_t>(plane.data.size());
    double total_sum = 0.0;
    for (int i = 0; i < kOtsuBins; ++i) total_sum += static_cast<double>(i) * hist[i];

    // Split after bin t: class 0 = bins [0, t], class 1 = bins (t, 255].
    std::int64_t w0 = 0;
    double sum0 = 0.0;
    double best_var = -1.0;
    int best_t = 0;
    for (int t = 0; t < kOtsuBins; ++t) {
        w0 += hist[t];
        sum0 += static_cast<double>(t) * hist[t];
        const std::int64_t w1 = total - w0;
        if (w0 == 0 || w1 == 0) continue;
        const double mu0 = sum0 / w0;
        const double mu1 = (total_sum - sum0) / w1;
        const double var = static_cast<double>(w0) * static_cast<double>(w1) * (mu0 - mu1) * (mu0 - mu1);
        if (var > best_var) {
            best_var = var;
            best_t = t;
        }
    }
    // Upper edge of the winning bin, so that `value > threshold` selects class 1.
    return lo + bin_width * (best_t + 1);
}

SegmentationResult segment_vegetation(const RgbImage& img, const SegmentationOptions& opt) {
    const GrayPlane exg = compute_exg(img);
    SegmentationResult result;
    result.mask = BinaryMask(img.width, img.height);

    double threshold = 0.0;
    try {
        threshold = otsu_threshold(exg);
    } catch (const ConstantPlaneError&) {
        const double v = exg.data.empty() ? 0.0 : exg.data.front();
        if (v > 0.0) {
            // Uniformly green frame: keep everything and flag it so callers can warn.
            std::fill(result.mask.bits.begin(), result.mask.bits.end(), std::uint8_t{1});
            result.degenerate_full = true;
            result.threshold = v;
            return result;
        }
        if (opt.empty_is_error)
            throw EmptySegmentationError("segment_vegetation: no vegetation signal in image");
        return result;  // empty mask
    }

    result.threshold = threshold;
    for (std::size_t i = 0; i < exg.data.size(); ++i)
        result.mask.bits[i] = exg.data[i] > threshold ? 1 : 0;
    if (opt.open_radius > 0) result.mask = morphological_open(result.mask, opt.open_radius);
    return result;
}

namespace {

// Square structuring element; adequate for the optional despeckling pass.
BinaryMask erode(const BinaryMask& m, int r) {
    BinaryMask out(m.width, m.height);
    for (int y = 0; y < m.height; ++y) {
        for (int x = 0; x < m.width; ++x) {
            bool keep = true;
            for (int dy = -r; keep && dy <= r; ++dy) {
                for (int dx = -r; dx <= r; ++dx) {
                    const int nx = x + dx;
                    const int ny = y + dy;
                    if (!m.in_bounds(nx, ny) || !m.test(nx, ny)) {
                        keep = false;
                        break;
                    }
                }
            }
            out.set(x, y, keep);
        }
    }
    return out;
}

BinaryMask dilate(const BinaryMask& m, int r) {
    BinaryMask out(m.width, m.height);
    for (int y = 0; y < m.height; ++y) {
        for (int x = 0; x < m.width; ++x) {
            bool hit = false;
            for (int dy = -r; !hit && dy <= r; ++dy) {
                for (int dx = -r; dx <= r; ++dx) {
                    const int nx = x + dx;
                    const int ny = y + dy;
                    if (m.in_bounds(nx, ny) && m.test(nx, ny)) {
                        hit = true;
                        break;
                    }
                }
            }
            out.set(x, y, hit);
        }
    }
    return out;
}

}  // namespace

BinaryMask morphological_open(const BinaryMask& mask, int radius) {
    if (radius <= 0) return mask;
    return dilate(erode(mask, radius), radius);
}

namespace {

// Zhang-Suen neighbor order P2..P9: N, NE, E, SE, S, SW, W, NW.
constexpr int kNbrDx[8] = {0, 1, 1, 1, 0, -1, -1, -1};
constexpr int kNbrDy[8] = {-1, -1, 0, 1, 1, 1, 0, -1};

BinaryMask thin_zhang_suen(const BinaryMask& mask) {
    BinaryMask cur = mask;
    std::vector<PixelCoord> to_clear;
    to_clear.reserve(1024);

    auto value = [&cur](int x, int y) -> int {
        return cur.in_bounds(x, y) && cur.test(x, y) ? 1 : 0;
    };

    bool changed = true;
    while (changed) {
        changed = false;
        for (int pass = 0; pass < 2; ++pass) {
            to_clear.clear();
            for (int y = 0; y < cur.height; ++y) {
                for (int x = 0; x < cur.width; ++x) {
                    if (!cur.test(x, y)) continue;
                    int n[8];
                    for (int k = 0; k < 8; ++k) n[k] = value(x + kNbrDx[k], y + kNbrDy[k]);
                    const int b = n[0] + n[1] + n[2] + n[3] + n[4] + n[5] + n[6] + n[7];
                    if (b < 2 || b > 6) continue;
                    int a = 0;
                    for (int k = 0; k < 8; ++k)
                        if (n[k] == 0 && n[(k + 1) % 8] == 1) ++a;
                    if (a != 1) continue;
                    // n[0]=P2(N), n[2]=P4(E), n[4]=P6(S), n[6]=P8(W)
                    if (pass == 0) {
                        if (n[0] * n[2] * n[4] != 0) continue;
                        if (n[2] * n[4] * n[6] != 0) continue;
                    } else {
                        if (n[0] * n[2] * n[6] != 0) continue;
                        if (n[0] * n[4] * n[6] != 0) continue;
                    }
                    to_clear.push_back({x, y});
                }
            }
            if (!to_clear.empty()) changed = true;
            for (const auto& p : to_clear) cur.set(p.x, p.y, false);
        }
    }
    return cur;
}

}  // namespace

Skeleton skeletonize(const BinaryMask& mask) {
    const BinaryMask thin = thin_zhang_suen(mask);
    const LabelMap labels = connected_components(thin);

    Skeleton sk;
    sk.width = mask.width;
    sk.height = mask.height;
    sk.components.resize(labels.count);
    for (int i = 0; i < labels.count; ++i) sk.components[i].id = i + 1;
    for (int y = 0; y < thin.height; ++y) {
        for (int x = 0; x < thin.width; ++x) {
            const std::int32_t l = labels.at(x, y);
            if (l > 0) sk.components[l - 1].pixels.push_back({x, y});
        }
    }
    for (auto& comp : sk.components) {
        comp.orientation_deg =
            comp.pixels.size() >= 2 ? component_orientation(comp.pixels) : 0.0;
    }
    return sk;
}

LabelMap connected_components(const BinaryMask& mask) {
    LabelMap out(mask.width, mask.height);
    std::vector<PixelCoord> stack;
    for (int y = 0; y < mask.height; ++y) {
        for (int x = 0; x < mask.width; ++x) {
            if (!mask.test(x, y) || out.at(x, y) != 0) continue;
            const std::int32_t label = ++out.count;
            stack.push_back({x, y});
            out.at(x, y) = label;
            while (!stack.empty()) {
                const PixelCoord p = stack.back();
                stack.pop_back();
                for (int k = 0; k < 8; ++k) {
                    const int nx = p.x + kNbrDx[k];
                    const int ny = p.y + kNbrDy[k];
                    if (nx < 0 || nx >= mask.width || ny < 0 || ny >= mask.height) continue;
                    if (!mask.test(nx, ny) || out.at(nx, ny) != 0) continue;
                    out.at(nx, ny) = label;
                    stack.push_back({nx, ny});
                }
            }
        }
    }
    return out;
}

double component_orientation(std::span<const PixelCoord> pixels) {
    if (pixels.size() < 2)
        throw DegenerateComponentError("component_orientation: need at least 2 pixels");
    double mx = 0.0;
    double my = 0.0;
    for (const auto& p : pixels) {
        mx += p.x;
        my += p.y;
    }
    mx /= static_cast<double>(pixels.size());
    my /= static_cast<double>(pixels.size());

    double sxx = 0.0;
    double syy = 0.0;
    double sxy = 0.0;
    for (const auto& p : pixels) {
        const double dx = p.x - mx;
        const double dy = p.y - my;
        sxx += dx * dx;
        syy += dy * dy;
        sxy += dx * dy;
    }
    const double angle = 0.5 * std::atan2(2.0 * sxy, sxx - syy) * kRadToDeg;
    return normalize_axis_deg(angle);
}

}  // namespace rowweed
