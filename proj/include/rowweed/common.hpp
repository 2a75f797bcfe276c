#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <vector>

namespace rowweed {

struct PixelCoord {
    int x = 0;
    int y = 0;
    friend bool operator==(const PixelCoord&, const PixelCoord&) = default;
};

/// A line in normal form: rho = x*cos(theta) + y*sin(theta), theta in (-90, 90],
/// origin at the top-left pixel, y axis pointing down.
struct PolarLine {
    double theta_deg = 0.0;
    double rho_px = 0.0;
};

inline constexpr double kDegToRad = std::numbers::pi / 180.0;
inline constexpr double kRadToDeg = 180.0 / std::numbers::pi;

/// Maps an angle to the undirected-axis range (-90, 90].
inline double normalize_axis_deg(double deg) {
    while (deg > 90.0) deg -= 180.0;
    while (deg <= -90.0) deg += 180.0;
    return deg;
}

/// Distance between two undirected-axis angles, in [0, 90].
inline double axis_distance_deg(double a, double b) {
    double d = std::fabs(a - b);
    d = std::fmod(d, 180.0);
    return std::min(d, 180.0 - d);
}

/// Normal angle of a line whose direction angle is `direction_deg`.
inline double direction_to_normal_deg(double direction_deg) {
    return normalize_axis_deg(direction_deg + 90.0);
}

/// Perpendicular distance from a point to a polar line.
inline double line_point_distance(const PolarLine& line, double x, double y) {
    const double t = line.theta_deg * kDegToRad;
    return std::fabs(x * std::cos(t) + y * std::sin(t) - line.rho_px);
}

// --- Deterministic RNG utilities -------------------------------------------
//
// All randomized stages (dataset split, training shuffles, field synthesis)
// draw from these helpers instead of <random> distributions so that a seed
// produces bit-identical output on every platform and standard library.

/// splitmix64; good enough as both a stream generator and a coordinate hash.
inline std::uint64_t splitmix64(std::uint64_t& state) {
    state += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d4a2c62d64de8bULL;
    return z ^ (z >> 31);
}

class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() { return splitmix64(state_); }

    /// Uniform double in [0, 1).
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    /// Uniform double in [lo, hi).
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    /// Uniform integer in [0, n), n > 0.
    std::uint64_t below(std::uint64_t n) { return next_u64() % n; }

    /// Standard normal via Box-Muller.
    double gauss() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u1 = uniform();
        double u2 = uniform();
        while (u1 <= 0.0) u1 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double a = 2.0 * std::numbers::pi * u2;
        spare_ = r * std::sin(a);
        have_spare_ = true;
        return r * std::cos(a);
    }

    double gauss(double mean, double sigma) { return mean + sigma * gauss(); }

    /// Fisher-Yates with explicit index draws, independent of std::shuffle.
    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (std::size_t i = v.size(); i > 1; --i) {
            const std::size_t j = static_cast<std::size_t>(below(i));
            std::swap(v[i - 1], v[j]);
        }
    }

private:
    std::uint64_t state_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

/// Stateless hash of a lattice coordinate to [0, 1); used by value noise.
inline double coord_hash01(std::int64_t x, std::int64_t y, std::uint64_t seed) {
    std::uint64_t s = seed ^ (static_cast<std::uint64_t>(x) * 0x9e3779b97f4a7c15ULL) ^
                      (static_cast<std::uint64_t>(y) * 0xc2b2ae3d27d4eb4fULL);
    return static_cast<double>(splitmix64(s) >> 11) * 0x1.0p-53;
}

}  // namespace rowweed
