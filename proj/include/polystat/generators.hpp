#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "polystat/geometry.hpp"

namespace polystat {

namespace detail {

// mt19937_64 with an explicit uint64 -> double mapping so that generated
// polygons are bit-identical across standard libraries and platforms.
class DeterministicRng {
public:
    explicit DeterministicRng(std::uint64_t seed) : eng_(seed) {}

    // Uniform in [0, 1).
    double uniform() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

private:
    std::mt19937_64 eng_;
};

}  // namespace detail

// Regular n-gon inscribed in the circle of the given radius, first vertex
// at angle 0.
inline Polygon make_regular(int n, double circumradius) {
    if (n < 3) throw InvalidParams("regular polygon needs n >= 3");
    if (!(circumradius > 0.0)) throw InvalidParams("circumradius must be positive");
    std::vector<Point> pts;
    pts.reserve(static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k) {
        const double angle = kTwoPi * k / n;
        pts.push_back({circumradius * std::cos(angle), circumradius * std::sin(angle)});
    }
    return Polygon::from_vertices(std::move(pts));
}

inline Polygon make_rectangle(double width, double height) {
    if (!(width > 0.0) || !(height > 0.0)) throw InvalidParams("rectangle sides must be positive");
    return Polygon::from_vertices({{0.0, 0.0}, {width, 0.0}, {width, height}, {0.0, height}});
}

// Kite symmetric across the y-axis: (0,-h1), (w,0), (0,h2), (-w,0).
inline Polygon make_kite(double half_width, double lower_height, double upper_height) {
    if (!(half_width > 0.0) || !(lower_height > 0.0) || !(upper_height > 0.0))
        throw InvalidParams("kite parameters must be positive");
    return Polygon::from_vertices(
        {{0.0, -lower_height}, {half_width, 0.0}, {0.0, upper_height}, {-half_width, 0.0}});
}

// Convex n-gon on the unit circle from sorted random directions; a minimum
// angular gap keeps every vertex well away from straight. Deterministic for
// a given seed.
inline Polygon make_random_convex(int n, std::uint64_t seed) {
    if (n < 3) throw InvalidParams("random convex polygon needs n >= 3");
    detail::DeterministicRng rng(seed);
    const double min_gap = 0.1 * (kTwoPi / n);
    for (int attempt = 0; attempt < 10000; ++attempt) {
        std::vector<double> angles(static_cast<std::size_t>(n));
        for (double& a : angles) a = rng.uniform(0.0, kTwoPi);
        std::sort(angles.begin(), angles.end());
        double smallest = kTwoPi - angles.back() + angles.front();
        for (std::size_t i = 0; i + 1 < angles.size(); ++i)
            smallest = std::min(smallest, angles[i + 1] - angles[i]);
        if (smallest < min_gap) continue;
        std::vector<Point> pts;
        pts.reserve(angles.size());
        for (double a : angles) pts.push_back({std::cos(a), std::sin(a)});
        return Polygon::from_vertices(std::move(pts));
    }
    throw InvalidParams("failed to sample a convex polygon");
}

// Regular n-gon (circumradius 1) with every vertex displaced by a uniform
// offset in [-eps, eps]^2; resamples until the result is a valid polygon.
inline Polygon make_perturbed_regular(int n, double eps, std::uint64_t seed) {
    if (n < 3) throw InvalidParams("perturbed regular polygon needs n >= 3");
    if (!(eps >= 0.0)) throw InvalidParams("perturbation amplitude must be non-negative");
    const Polygon base = make_regular(n, 1.0);
    detail::DeterministicRng rng(seed);
    for (int attempt = 0; attempt < 10000; ++attempt) {
        std::vector<Point> pts(base.vertices());
        for (Point& p : pts) p = p + Vec2{rng.uniform(-eps, eps), rng.uniform(-eps, eps)};
        try {
            return Polygon::from_vertices(std::move(pts));
        } catch (const InvalidPolygon&) {
            // too large a displacement this round; draw again
        }
    }
    throw InvalidParams("perturbation amplitude too large to keep the polygon valid");
}

}  // namespace polystat
