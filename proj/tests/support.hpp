#pragma once

// Shared helpers for the test suites: deterministic random polygon sampling
// and admissible-parameter sampling.

#include <cstdint>
#include <random>

#include "polystat/generators.hpp"
#include "polystat/perturbations.hpp"

namespace testsupport {

using namespace polystat;

class Rng {
public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}

    double uniform() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
    int uniform_int(int lo, int hi) {  // inclusive bounds
        return lo + static_cast<int>(eng_() % static_cast<std::uint64_t>(hi - lo + 1));
    }
    std::uint64_t raw() { return eng_(); }

private:
    std::mt19937_64 eng_;
};

// Convex polygon with a random rigid motion and scale applied, so the suite
// is not biased toward unit-circle coordinates.
inline Polygon random_convex(Rng& rng, int n_min = 3, int n_max = 9) {
    const int n = rng.uniform_int(n_min, n_max);
    const Polygon base = make_random_convex(n, rng.raw());
    const double scale = rng.uniform(0.3, 3.0);
    const double angle = rng.uniform(0.0, kTwoPi);
    const Vec2 shift{rng.uniform(-5.0, 5.0), rng.uniform(-5.0, 5.0)};
    return base.scaled(scale).rotated_by(angle).translated(shift);
}

// Mix of convex polygons and perturbed regular ones; larger amplitudes
// produce mildly non-convex shapes.
inline Polygon random_polygon(Rng& rng, int n_min = 3, int n_max = 9) {
    if (rng.uniform() < 0.65) return random_convex(rng, n_min, n_max);
    const int n = rng.uniform_int(n_min, n_max);
    const double eps = rng.uniform(0.02, 0.3);
    return make_perturbed_regular(n, eps, rng.raw());
}

inline Polygon random_triangle(Rng& rng) { return random_convex(rng, 3, 3); }

// Random parameter well inside the admissible interval (at most `frac` of
// the bound on the drawn side).
inline double random_admissible_t(const Polygon& poly, MoveFamily family, std::size_t index, Rng& rng,
                                  double frac = 0.8) {
    const AdmissibleRange range = admissible_range(poly, family, index);
    const double u = rng.uniform(0.05, frac);
    return rng.uniform() < 0.5 ? range.lo * u : range.hi * u;
}

inline MoveFamily random_family(Rng& rng) {
    return static_cast<MoveFamily>(rng.uniform_int(0, 2));
}

}  // namespace testsupport
