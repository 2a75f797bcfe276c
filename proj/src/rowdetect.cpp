#include "rowweed/rowdetect.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <map>
#include <mutex>
#include <thread>
#include <tuple>

namespace rowweed {

namespace {

struct TrigTable {
    std::vector<double> cos_t;
    std::vector<double> sin_t;
};

TrigTable make_trig(const HoughAccumulator& acc) {
    TrigTable t;
    t.cos_t.resize(acc.theta_bins);
    t.sin_t.resize(acc.theta_bins);
    for (int i = 0; i < acc.theta_bins; ++i) {
        const double rad = acc.theta_deg(i) * kDegToRad;
        t.cos_t[i] = std::cos(rad);
        t.sin_t[i] = std::sin(rad);
    }
    return t;
}

// One vote per (point, theta column). Theta-major loop keeps columns
// independent, so column ranges can run on separate threads with identical
// results (unit votes sum exactly in float).
void accumulate_columns(std::span<const PixelCoord> points, const TrigTable& trig,
                        HoughAccumulator& acc, int t_begin, int t_end) {
    const double inv_res = 1.0 / acc.rho_res_px;
    for (int t = t_begin; t < t_end; ++t) {
        float* column = acc.votes.data() + static_cast<std::size_t>(t) * acc.rho_bins;
        const double c = trig.cos_t[t];
        const double s = trig.sin_t[t];
        for (const auto& p : points) {
            const double rho = p.x * c + p.y * s;
            const int r = static_cast<int>(std::lround((rho + acc.rho_max) * inv_res));
            column[r] += 1.0f;
        }
    }
}

void accumulate(std::span<const PixelCoord> points, HoughAccumulator& acc, bool parallel) {
    const TrigTable trig = make_trig(acc);
    unsigned n_threads = parallel ? std::thread::hardware_concurrency() : 1;
    if (n_threads <= 1 || acc.theta_bins < 64) {
        accumulate_columns(points, trig, acc, 0, acc.theta_bins);
        return;
    }
    n_threads = std::min<unsigned>(n_threads, 8);
    std::vector<std::future<void>> jobs;
    const int chunk = (acc.theta_bins + static_cast<int>(n_threads) - 1) / static_cast<int>(n_threads);
    for (unsigned i = 0; i < n_threads; ++i) {
        const int t0 = static_cast<int>(i) * chunk;
        const int t1 = std::min(acc.theta_bins, t0 + chunk);
        if (t0 >= t1) break;
        jobs.push_back(std::async(std::launch::async, [&, t0, t1] {
            accumulate_columns(points, trig, acc, t0, t1);
        }));
    }
    for (auto& j : jobs) j.get();
}

}  // namespace

HoughAccumulator make_accumulator(int width, int height, const HoughConfig& cfg) {
    HoughAccumulator acc;
    acc.theta_res_deg = cfg.theta_res_deg;
    acc.rho_res_px = cfg.rho_res_px;
    acc.theta_bins = static_cast<int>(std::lround(180.0 / cfg.theta_res_deg));
    acc.rho_max = std::ceil(std::hypot(static_cast<double>(width), static_cast<double>(height)));
    acc.rho_bins = static_cast<int>(std::lround(2.0 * acc.rho_max / cfg.rho_res_px)) + 1;
    acc.votes.assign(static_cast<std::size_t>(acc.theta_bins) * acc.rho_bins, 0.0f);
    return acc;
}

HoughAccumulator hough_transform(std::span<const PixelCoord> points, const HoughConfig& cfg,
                                 int width, int height) {
    HoughAccumulator acc = make_accumulator(width, height, cfg);
    accumulate(points, acc, points.size() > 4096);
    return acc;
}

HoughAccumulator hough_ones(int width, int height, const HoughConfig& cfg) {
    std::vector<PixelCoord> all;
    all.reserve(static_cast<std::size_t>(width) * height);
    for (int y = 0; y < height; ++y)
        for (int x = 0; x < width; ++x) all.push_back({x, y});
    return hough_transform(all, cfg, width, height);
}

const HoughAccumulator& hough_ones_cached(int width, int height, const HoughConfig& cfg) {
    using Key = std::tuple<int, int, double, double>;
    static std::map<Key, HoughAccumulator> cache;
    static std::mutex mutex;
    const Key key{width, height, cfg.theta_res_deg, cfg.rho_res_px};
    std::lock_guard<std::mutex> lock(mutex);
    auto it = cache.find(key);
    if (it == cache.end()) it = cache.emplace(key, hough_ones(width, height, cfg)).first;
    return it->second;
}

HoughAccumulator normalize(const HoughAccumulator& h, const HoughAccumulator& h_ones) {
    if (!h.same_shape(h_ones))
        throw DimensionMismatchError("normalize: accumulator shapes differ");
    HoughAccumulator out = h;
    for (std::size_t i = 0; i < out.votes.size(); ++i) {
        const float denom = h_ones.votes[i];
        out.votes[i] = denom > 0.0f ? h.votes[i] / denom : 0.0f;
    }
    return out;
}

double main_orientation(const Skeleton& sk) {
    if (sk.empty()) throw EmptySkeletonError("main_orientation: skeleton has no components");
    // 180 one-degree bins centered on integer angles -89..90.
    std::vector<std::size_t> hist(180, 0);
    auto bin_index = [](double deg) {
        int b = static_cast<int>(std::lround(deg));
        if (b <= -90) b += 180;
        if (b > 90) b -= 180;
        return b + 89;  // -89 -> 0, 90 -> 179
    };
    for (const auto& comp : sk.components)
        hist[bin_index(comp.orientation_deg)] += comp.pixels.size();
    const std::size_t best = static_cast<std::size_t>(
        std::max_element(hist.begin(), hist.end()) - hist.begin());
    return static_cast<double>(static_cast<int>(best) - 89);
}

std::vector<DetectedLine> detect_crop_lines(const Skeleton& sk, const HoughConfig& cfg,
                                            int width, int height) {
    if (sk.empty()) throw EmptySkeletonError("detect_crop_lines: skeleton has no components");

    const std::vector<PixelCoord> pixels = sk.all_pixels();
    std::vector<int> pixel_component(pixels.size());
    {
        std::size_t i = 0;
        for (const auto& comp : sk.components)
            for (std::size_t k = 0; k < comp.pixels.size(); ++k) pixel_component[i++] = comp.id;
    }

    const double theta_lines = main_orientation(sk);
    const HoughAccumulator& ones = hough_ones_cached(width, height, cfg);
    HoughAccumulator norm = normalize(hough_transform(pixels, cfg, width, height), ones);

    std::vector<DetectedLine> accepted;
    std::vector<PixelCoord> recovered;
    std::vector<std::uint32_t> recovered_idx;
    while (true) {
        // Global maximum; first bin wins ties, which keeps runs reproducible.
        std::size_t best = 0;
        float best_val = 0.0f;
        for (std::size_t i = 0; i < norm.votes.size(); ++i) {
            if (norm.votes[i] > best_val) {
                best_val = norm.votes[i];
                best = i;
            }
        }
        if (best_val <= cfg.norm_threshold) break;

        const int t = static_cast<int>(best / norm.rho_bins);
        const int r = static_cast<int>(best % norm.rho_bins);
        const PolarLine peak{norm.theta_deg(t), norm.rho_px(r)};

        recovered.clear();
        recovered_idx.clear();
        for (std::size_t i = 0; i < pixels.size(); ++i) {
            if (line_point_distance(peak, pixels[i].x, pixels[i].y) <= cfg.support_band_px) {
                recovered.push_back(pixels[i]);
                recovered_idx.push_back(static_cast<std::uint32_t>(i));
            }
        }

        if (recovered.empty()) {
            // Band narrower than the rho quantization; drop the bin itself.
            norm.votes[best] = 0.0f;
            continue;
        }

        const HoughAccumulator temp =
            normalize(hough_transform(recovered, cfg, width, height), ones);
        for (std::size_t i = 0; i < norm.votes.size(); ++i)
            norm.votes[i] = std::max(0.0f, norm.votes[i] - temp.votes[i]);

        if (axis_distance_deg(peak.theta_deg, theta_lines) < cfg.angle_gate_deg) {
            DetectedLine line;
            line.theta_deg = peak.theta_deg;
            line.rho_px = peak.rho_px;
            line.score = best_val;
            line.supporting_pixel_indices = recovered_idx;
            std::vector<int> comp_ids;
            for (std::uint32_t idx : recovered_idx) comp_ids.push_back(pixel_component[idx]);
            std::sort(comp_ids.begin(), comp_ids.end());
            comp_ids.erase(std::unique(comp_ids.begin(), comp_ids.end()), comp_ids.end());
            line.supporting_component_ids = std::move(comp_ids);
            accepted.push_back(std::move(line));
        }
    }
    return accepted;
}

}  // namespace rowweed
