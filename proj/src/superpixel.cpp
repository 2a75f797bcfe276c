#include "rowweed/superpixel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace rowweed {

namespace {

double srgb_decode(double c8) {
    const double c = c8 / 255.0;
    return c <= 0.04045 ? c / 12.92 : std::pow((c + 0.055) / 1.055, 2.4);
}

double srgb_encode(double linear) {
    const double c =
        linear <= 0.0031308 ? 12.92 * linear : 1.055 * std::pow(linear, 1.0 / 2.4) - 0.055;
    return std::clamp(c, 0.0, 1.0);
}

// D65 reference white.
constexpr double kXn = 0.95047;
constexpr double kYn = 1.0;
constexpr double kZn = 1.08883;
constexpr double kLabEps = 216.0 / 24389.0;   // (6/29)^3
constexpr double kLabKappa = 24389.0 / 27.0;  // (29/3)^3

double lab_f(double t) { return t > kLabEps ? std::cbrt(t) : (kLabKappa * t + 16.0) / 116.0; }

double lab_f_inv(double ft) {
    const double t3 = ft * ft * ft;
    return t3 > kLabEps ? t3 : (116.0 * ft - 16.0) / kLabKappa;
}

}  // namespace

LabColor srgb_to_lab(std::uint8_t r8, std::uint8_t g8, std::uint8_t b8) {
    const double r = srgb_decode(r8);
    const double g = srgb_decode(g8);
    const double b = srgb_decode(b8);
    const double x = 0.4124564 * r + 0.3575761 * g + 0.1804375 * b;
    const double y = 0.2126729 * r + 0.7151522 * g + 0.0721750 * b;
    const double z = 0.0193339 * r + 0.1191920 * g + 0.9503041 * b;
    const double fx = lab_f(x / kXn);
    const double fy = lab_f(y / kYn);
    const double fz = lab_f(z / kZn);
    return {116.0 * fy - 16.0, 500.0 * (fx - fy), 200.0 * (fy - fz)};
}

std::array<std::uint8_t, 3> lab_to_srgb(const LabColor& lab) {
    const double fy = (lab.l + 16.0) / 116.0;
    const double fx = fy + lab.a / 500.0;
    const double fz = fy - lab.b / 200.0;
    const double x = kXn * lab_f_inv(fx);
    const double y = kYn * (lab.l > kLabKappa * kLabEps ? fy * fy * fy : lab.l / kLabKappa);
    const double z = kZn * lab_f_inv(fz);
    const double r = 3.2404542 * x - 1.5371385 * y - 0.4985314 * z;
    const double g = -0.9692660 * x + 1.8760108 * y + 0.0415560 * z;
    const double b = 0.0556434 * x - 0.2040259 * y + 1.0572252 * z;
    auto to8 = [](double linear) {
        return static_cast<std::uint8_t>(std::lround(srgb_encode(std::clamp(linear, 0.0, 1.0)) * 255.0));
    };
    return {to8(r), to8(g), to8(b)};
}

LabImage rgb_to_lab(const RgbImage& img) {
    LabImage lab(img.width, img.height);
    const std::uint8_t* p = img.data.data();
    for (std::size_t i = 0; i < img.pixel_count(); ++i, p += 3) {
        const LabColor c = srgb_to_lab(p[0], p[1], p[2]);
        lab.l[i] = c.l;
        lab.a[i] = c.a;
        lab.b[i] = c.b;
    }
    return lab;
}

namespace {

struct Center {
    double l, a, b, x, y;
};

constexpr int kNbrDx[8] = {0, 1, 1, 1, 0, -1, -1, -1};
constexpr int kNbrDy[8] = {-1, -1, 0, 1, 1, 1, 0, -1};

// Splits the raw assignment into 8-connected fragments, absorbs fragments
// smaller than min_size into their largest neighbor, and renumbers the
// survivors contiguously in raster first-encounter order.
std::vector<std::int32_t> enforce_connectivity(const std::vector<std::int32_t>& labels, int width,
                                               int height, int min_size) {
    const std::size_t n = labels.size();
    std::vector<std::int32_t> frag(n, -1);
    std::vector<int> frag_size;
    std::vector<std::vector<std::int32_t>> frag_pixels;

    std::vector<std::int32_t> stack;
    for (std::size_t start = 0; start < n; ++start) {
        if (frag[start] != -1) continue;
        const std::int32_t id = static_cast<std::int32_t>(frag_size.size());
        const std::int32_t lbl = labels[start];
        frag_size.push_back(0);
        frag_pixels.emplace_back();
        stack.push_back(static_cast<std::int32_t>(start));
        frag[start] = id;
        while (!stack.empty()) {
            const std::int32_t pi = stack.back();
            stack.pop_back();
            frag_size[id]++;
            frag_pixels[id].push_back(pi);
            const int px = static_cast<int>(pi % width);
            const int py = static_cast<int>(pi / width);
            for (int k = 0; k < 8; ++k) {
                const int nx = px + kNbrDx[k];
                const int ny = py + kNbrDy[k];
                if (nx < 0 || nx >= width || ny < 0 || ny >= height) continue;
                const std::size_t ni = static_cast<std::size_t>(ny) * width + nx;
                if (frag[ni] == -1 && labels[ni] == lbl) {
                    frag[ni] = id;
                    stack.push_back(static_cast<std::int32_t>(ni));
                }
            }
        }
    }

    const int frag_count = static_cast<int>(frag_size.size());
    // final_of[f] = region id the fragment maps to, -1 while unresolved
    std::vector<std::int32_t> final_of(frag_count, -1);
    std::vector<int> region_size;
    std::vector<std::int32_t> kept_order;
    for (int f = 0; f < frag_count; ++f) {
        if (frag_size[f] >= min_size) {
            final_of[f] = static_cast<std::int32_t>(region_size.size());
            region_size.push_back(frag_size[f]);
            kept_order.push_back(f);
        }
    }
    if (region_size.empty()) {
        // Everything is small (tiny images): promote the largest fragment.
        const int f = static_cast<int>(
            std::max_element(frag_size.begin(), frag_size.end()) - frag_size.begin());
        final_of[f] = 0;
        region_size.push_back(frag_size[f]);
    }

    // Attach orphans to the largest adjacent resolved region; repeat until all
    // are placed, promoting the largest stuck orphan whenever a pass stalls.
    bool any_unresolved = true;
    while (any_unresolved) {
        any_unresolved = false;
        bool progress = false;
        for (int f = 0; f < frag_count; ++f) {
            if (final_of[f] != -1) continue;
            std::int32_t best_region = -1;
            for (std::int32_t pi : frag_pixels[f]) {
                const int px = static_cast<int>(pi % width);
                const int py = static_cast<int>(pi / width);
                for (int k = 0; k < 8; ++k) {
                    const int nx = px + kNbrDx[k];
                    const int ny = py + kNbrDy[k];
                    if (nx < 0 || nx >= width || ny < 0 || ny >= height) continue;
                    const std::int32_t nf = frag[static_cast<std::size_t>(ny) * width + nx];
                    if (nf == f || final_of[nf] == -1) continue;
                    const std::int32_t reg = final_of[nf];
                    if (best_region == -1 || region_size[reg] > region_size[best_region])
                        best_region = reg;
                }
            }
            if (best_region != -1) {
                final_of[f] = best_region;
                region_size[best_region] += frag_size[f];
                progress = true;
            } else {
                any_unresolved = true;
            }
        }
        if (any_unresolved && !progress) {
            int best_f = -1;
            for (int f = 0; f < frag_count; ++f)
                if (final_of[f] == -1 && (best_f == -1 || frag_size[f] > frag_size[best_f]))
                    best_f = f;
            final_of[best_f] = static_cast<std::int32_t>(region_size.size());
            region_size.push_back(frag_size[best_f]);
        }
    }

    std::vector<std::int32_t> out(n);
    for (std::size_t i = 0; i < n; ++i) out[i] = final_of[frag[i]];
    return out;
}

std::vector<std::int32_t> compact_labels(std::vector<std::int32_t> labels) {
    std::int32_t max_label = -1;
    for (std::int32_t l : labels) max_label = std::max(max_label, l);
    std::vector<std::int32_t> remap(static_cast<std::size_t>(max_label) + 1, -1);
    std::int32_t next = 0;
    for (std::int32_t& l : labels) {
        if (remap[l] == -1) remap[l] = next++;
        l = remap[l];
    }
    return labels;
}

}  // namespace

SuperpixelMap slic(const RgbImage& img, const SlicConfig& cfg) {
    const std::size_t n = img.pixel_count();
    const long requested = std::lround(cfg.count_fraction * static_cast<double>(n));
    if (requested < 1 || requested > static_cast<long>(n))
        throw InvalidCountError("slic: requested superpixel count out of range");

    const LabImage lab = rgb_to_lab(img);
    const double step = std::sqrt(static_cast<double>(n) / static_cast<double>(requested));
    const int grid_x = std::max(1, static_cast<int>(std::lround(img.width / step)));
    const int grid_y = std::max(1, static_cast<int>(std::lround(img.height / step)));

    std::vector<Center> centers;
    centers.reserve(static_cast<std::size_t>(grid_x) * grid_y);
    for (int gy = 0; gy < grid_y; ++gy) {
        for (int gx = 0; gx < grid_x; ++gx) {
            const double cx = (gx + 0.5) * img.width / grid_x;
            const double cy = (gy + 0.5) * img.height / grid_y;
            int px = std::clamp(static_cast<int>(cx), 0, img.width - 1);
            int py = std::clamp(static_cast<int>(cy), 0, img.height - 1);

            // Nudge the seed to the lowest-gradient spot in its 3x3 block.
            double best_grad = std::numeric_limits<double>::infinity();
            int bx = px;
            int by = py;
            for (int dy = -1; dy <= 1; ++dy) {
                for (int dx = -1; dx <= 1; ++dx) {
                    const int x = px + dx;
                    const int y = py + dy;
                    if (x < 1 || x >= img.width - 1 || y < 1 || y >= img.height - 1) continue;
                    const std::size_t ir = lab.index(x + 1, y);
                    const std::size_t il = lab.index(x - 1, y);
                    const std::size_t id = lab.index(x, y + 1);
                    const std::size_t iu = lab.index(x, y - 1);
                    auto sq = [](double v) { return v * v; };
                    const double g = sq(lab.l[ir] - lab.l[il]) + sq(lab.a[ir] - lab.a[il]) +
                                     sq(lab.b[ir] - lab.b[il]) + sq(lab.l[id] - lab.l[iu]) +
                                     sq(lab.a[id] - lab.a[iu]) + sq(lab.b[id] - lab.b[iu]);
                    if (g < best_grad) {
                        best_grad = g;
                        bx = x;
                        by = y;
                    }
                }
            }
            const std::size_t i = lab.index(bx, by);
            centers.push_back({lab.l[i], lab.a[i], lab.b[i], static_cast<double>(bx),
                               static_cast<double>(by)});
        }
    }
    const int k = static_cast<int>(centers.size());

    std::vector<std::int32_t> labels(n);
    for (int y = 0; y < img.height; ++y) {
        const int gy = std::min(grid_y - 1, static_cast<int>(y * grid_y / img.height));
        for (int x = 0; x < img.width; ++x) {
            const int gx = std::min(grid_x - 1, static_cast<int>(x * grid_x / img.width));
            labels[lab.index(x, y)] = gy * grid_x + gx;
        }
    }

    const double m_over_s = cfg.compactness / step;
    std::vector<double> best_dist(n);
    for (int iter = 0; iter < cfg.iterations; ++iter) {
        std::fill(best_dist.begin(), best_dist.end(), std::numeric_limits<double>::infinity());
        const int window = static_cast<int>(std::ceil(step));
        for (int c = 0; c < k; ++c) {
            const Center& ctr = centers[c];
            const int x0 = std::max(0, static_cast<int>(ctr.x) - window);
            const int x1 = std::min(img.width - 1, static_cast<int>(ctr.x) + window);
            const int y0 = std::max(0, static_cast<int>(ctr.y) - window);
            const int y1 = std::min(img.height - 1, static_cast<int>(ctr.y) + window);
            for (int y = y0; y <= y1; ++y) {
                for (int x = x0; x <= x1; ++x) {
                    const std::size_t i = lab.index(x, y);
                    const double dl = lab.l[i] - ctr.l;
                    const double da = lab.a[i] - ctr.a;
                    const double db = lab.b[i] - ctr.b;
                    const double dx = x - ctr.x;
                    const double dy = y - ctr.y;
                    const double d =
                        dl * dl + da * da + db * db + (dx * dx + dy * dy) * m_over_s * m_over_s;
                    // Strict < plus ascending center order resolves ties to the
                    // lowest center id.
                    if (d < best_dist[i]) {
                        best_dist[i] = d;
                        labels[i] = c;
                    }
                }
            }
        }

        std::vector<double> sum_l(k, 0.0), sum_a(k, 0.0), sum_b(k, 0.0), sum_x(k, 0.0),
            sum_y(k, 0.0);
        std::vector<int> count(k, 0);
        for (int y = 0; y < img.height; ++y) {
            for (int x = 0; x < img.width; ++x) {
                const std::size_t i = lab.index(x, y);
                const std::int32_t c = labels[i];
                sum_l[c] += lab.l[i];
                sum_a[c] += lab.a[i];
                sum_b[c] += lab.b[i];
                sum_x[c] += x;
                sum_y[c] += y;
                count[c]++;
            }
        }
        for (int c = 0; c < k; ++c) {
            if (count[c] == 0) continue;  // keep a deserted center where it was
            centers[c] = {sum_l[c] / count[c], sum_a[c] / count[c], sum_b[c] / count[c],
                          sum_x[c] / count[c], sum_y[c] / count[c]};
        }
    }

    if (cfg.enforce_connectivity) {
        const int min_size = std::max(1, static_cast<int>(step * step / 4.0));
        labels = enforce_connectivity(labels, img.width, img.height, min_size);
    } else {
        labels = compact_labels(std::move(labels));
    }

    SuperpixelMap map;
    map.width = img.width;
    map.height = img.height;
    map.labels = std::move(labels);
    std::int32_t region_count = 0;
    for (std::int32_t l : map.labels) region_count = std::max(region_count, l + 1);
    map.regions.resize(region_count);
    for (std::int32_t r = 0; r < region_count; ++r) map.regions[r].id = r;
    for (int y = 0; y < img.height; ++y) {
        for (int x = 0; x < img.width; ++x) {
            const std::size_t i = lab.index(x, y);
            SuperpixelRegion& reg = map.regions[map.labels[i]];
            reg.pixel_count++;
            reg.centroid_x += x;
            reg.centroid_y += y;
            reg.mean_color.l += lab.l[i];
            reg.mean_color.a += lab.a[i];
            reg.mean_color.b += lab.b[i];
        }
    }
    for (auto& reg : map.regions) {
        if (reg.pixel_count == 0) continue;
        reg.centroid_x /= reg.pixel_count;
        reg.centroid_y /= reg.pixel_count;
        reg.mean_color.l /= reg.pixel_count;
        reg.mean_color.a /= reg.pixel_count;
        reg.mean_color.b /= reg.pixel_count;
    }
    return map;
}

std::vector<PixelCoord> trace_line(const PolarLine& line, int width, int height) {
    const double t = line.theta_deg * kDegToRad;
    const double c = std::cos(t);
    const double s = std::sin(t);
    // Point on the line closest to the origin, direction along the line.
    const double px = line.rho_px * c;
    const double py = line.rho_px * s;
    const double dx = -s;
    const double dy = c;

    // Liang-Barsky clip of the parametric line against the pixel-center rect;
    // each constraint has the form p * t <= q.
    double t0 = -std::numeric_limits<double>::infinity();
    double t1 = std::numeric_limits<double>::infinity();
    auto clip = [&](double p, double q) {
        if (std::fabs(p) < 1e-12) return q >= 0.0;
        const double r = q / p;
        if (p < 0.0)
            t0 = std::max(t0, r);
        else
            t1 = std::min(t1, r);
        return true;
    };
    const double xmax = width - 1.0;
    const double ymax = height - 1.0;
    if (!clip(-dx, px - 0.0) || !clip(dx, xmax - px) || !clip(-dy, py - 0.0) ||
        !clip(dy, ymax - py) || t0 > t1)
        return {};

    const int x0 = static_cast<int>(std::lround(px + t0 * dx));
    const int y0 = static_cast<int>(std::lround(py + t0 * dy));
    const int x1 = static_cast<int>(std::lround(px + t1 * dx));
    const int y1 = static_cast<int>(std::lround(py + t1 * dy));

    std::vector<PixelCoord> pts;
    int x = x0;
    int y = y0;
    const int adx = std::abs(x1 - x0);
    const int ady = std::abs(y1 - y0);
    const int sx = x0 < x1 ? 1 : -1;
    const int sy = y0 < y1 ? 1 : -1;
    int err = adx - ady;
    while (true) {
        if (x >= 0 && x < width && y >= 0 && y < height) pts.push_back({x, y});
        if (x == x1 && y == y1) break;
        const int e2 = 2 * err;
        if (e2 > -ady) {
            err -= ady;
            x += sx;
        }
        if (e2 < adx) {
            err += adx;
            y += sy;
        }
    }
    return pts;
}

std::vector<int> superpixels_on_line(const SuperpixelMap& sp, const PolarLine& line) {
    std::vector<char> seen(sp.regions.size(), 0);
    std::vector<int> ids;
    for (const auto& p : trace_line(line, sp.width, sp.height)) {
        const std::int32_t l = sp.at(p.x, p.y);
        if (!seen[l]) {
            seen[l] = 1;
            ids.push_back(l);
        }
    }
    std::sort(ids.begin(), ids.end());
    return ids;
}

}  // namespace rowweed
