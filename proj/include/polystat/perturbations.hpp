#pragma once

#include <optional>
#include <string>
#include <vector>

#include "polystat/geometry.hpp"

namespace polystat {

enum class MoveFamily { Slide = 0, Tilt = 1, MoveVertex = 2 };

inline const char* to_string(MoveFamily f) {
    switch (f) {
        case MoveFamily::Slide: return "slide";
        case MoveFamily::Tilt: return "tilt";
        case MoveFamily::MoveVertex: return "move_vertex";
    }
    return "unknown";
}

// One tagged perturbation: side index for Slide/Tilt, vertex index for
// MoveVertex. The parameter is a length for Slide/MoveVertex and radians
// for Tilt.
struct Move {
    MoveFamily family;
    std::size_t index;
    double t;
};

// Open parameter interval around 0 inside which a move keeps the polygon
// valid. Conservative: derived from collision/angle events, a global cap,
// a 0.9 shrink and sampled construction checks.
struct AdmissibleRange {
    double lo;  // < 0
    double hi;  // > 0
    bool contains(double t) const { return t > lo && t < hi; }
};

enum class SideEndpoint { Start, End };

namespace detail {

struct LineIntersection {
    Point point;
    double s;  // parameter along the first line
    double u;  // parameter along the second line
};

// p1 + s*d1 == p2 + u*d2. Directions need not be unit length.
inline LineIntersection intersect_lines(Point p1, Vec2 d1, Point p2, Vec2 d2) {
    const double den = cross(d1, d2);
    if (std::abs(den) <= 1e-12 * norm(d1) * norm(d2))
        throw ParallelAdjacentSide("adjacent side is parallel to the perturbed line");
    const Vec2 r = p2 - p1;
    const double s = cross(r, d2) / den;
    const double u = cross(r, d1) / den;
    return {p1 + d1 * s, s, u};
}

// Revalidate a perturbed vertex list. Orientation must survive the move;
// every other invariant failure also maps to OutOfRange.
inline Polygon rebuild_perturbed(std::vector<Point> verts, const char* what) {
    if (!(signed_area(verts) > 0.0)) throw OutOfRange(std::string(what) + ": orientation flipped");
    try {
        return Polygon::from_vertices(std::move(verts));
    } catch (const InvalidPolygon& e) {
        throw OutOfRange(std::string(what) + ": " + e.what());
    }
}

}  // namespace detail

// Translate side `side` parallel to itself at signed offset t along its
// outward normal; the endpoints stay on the adjacent sides' lines. Exact
// consequences (used as test oracles):
//   perimeter(P_t) = perimeter(P) + t*(cot(theta_i/2) + cot(theta_{i+1}/2))
//   area(P_t)      = area(P) + t*l_i + t^2*(cot(theta_i) + cot(theta_{i+1}))/2
inline Polygon slide(const Polygon& poly, std::size_t side, double t) {
    const auto& v = poly.vertices();
    const std::size_t n = v.size();
    if (side >= n) throw InvalidParams("side index out of range");
    if (t == 0.0) return poly;
    const Point a = v[side];
    const Point b = v[(side + 1) % n];
    const Point prev = v[(side + n - 1) % n];
    const Point next2 = v[(side + 2) % n];
    const Vec2 e = normalized(b - a);
    const Point base = a + outward_perp(e) * t;
    const auto ia = detail::intersect_lines(prev, a - prev, base, e);
    const auto ib = detail::intersect_lines(b, next2 - b, base, e);
    // Moved endpoints must stay strictly between their fixed neighbors'
    // positions along the adjacent lines (no crossing through a vertex).
    if (!(ia.s > 0.0) || !(ib.s < 1.0)) throw OutOfRange("slide: endpoint crossed an adjacent vertex");
    std::vector<Point> out(v);
    out[side] = ia.point;
    out[(side + 1) % n] = ib.point;
    return detail::rebuild_perturbed(std::move(out), "slide");
}

// Rotate the line of side `side` about the side's midpoint by t radians,
// counterclockwise for t > 0, which decreases the interior angle at the
// side's start vertex by exactly t and increases the one at its end vertex
// by exactly t. Endpoints stay on the adjacent sides' lines.
inline Polygon tilt(const Polygon& poly, std::size_t side, double t) {
    const auto& v = poly.vertices();
    const std::size_t n = v.size();
    if (side >= n) throw InvalidParams("side index out of range");
    if (t == 0.0) return poly;
    const Point a = v[side];
    const Point b = v[(side + 1) % n];
    const Point prev = v[(side + n - 1) % n];
    const Point next2 = v[(side + 2) % n];
    const Point mid = (a + b) * 0.5;
    const Vec2 e_new = rotated(normalized(b - a), t);
    const auto ia = detail::intersect_lines(prev, a - prev, mid, e_new);
    const auto ib = detail::intersect_lines(b, next2 - b, mid, e_new);
    if (!(ia.s > 0.0) || !(ib.s < 1.0)) throw OutOfRange("tilt: endpoint crossed an adjacent vertex");
    if (!(ia.u < 0.0) || !(ib.u > 0.0)) throw OutOfRange("tilt: side collapsed through its midpoint");
    std::vector<Point> out(v);
    out[side] = ia.point;
    out[(side + 1) % n] = ib.point;
    return detail::rebuild_perturbed(std::move(out), "tilt");
}

// Move vertex `vertex` by t along the unit direction of the diagonal joining
// its two neighbors. Exactly area preserving.
inline Polygon move_vertex(const Polygon& poly, std::size_t vertex, double t) {
    const auto& v = poly.vertices();
    const std::size_t n = v.size();
    if (vertex >= n) throw InvalidParams("vertex index out of range");
    if (t == 0.0) return poly;
    const Point prev = v[(vertex + n - 1) % n];
    const Point next = v[(vertex + 1) % n];
    const Vec2 diag = next - prev;
    const double dlen = norm(diag);
    if (!(dlen > 0.0)) throw OutOfRange("move_vertex: neighbors coincide");
    std::vector<Point> out(v);
    out[vertex] = v[vertex] + diag * (t / dlen);
    return detail::rebuild_perturbed(std::move(out), "move_vertex");
}

inline Polygon apply_move(const Polygon& poly, MoveFamily family, std::size_t index, double t) {
    switch (family) {
        case MoveFamily::Slide: return slide(poly, index, t);
        case MoveFamily::Tilt: return tilt(poly, index, t);
        case MoveFamily::MoveVertex: return move_vertex(poly, index, t);
    }
    throw InvalidParams("unknown move family");
}

inline Polygon apply_move(const Polygon& poly, const Move& move) {
    return apply_move(poly, move.family, move.index, move.t);
}

// Rotate side `side` by phi radians (counterclockwise for phi > 0) about one
// of its endpoints; the pivot stays fixed and the other endpoint slides along
// its adjacent side's line. Equal to a tilt by phi followed by the slide that
// restores incidence with the pivot.
inline Polygon rotate_about_vertex(const Polygon& poly, std::size_t side, SideEndpoint pivot, double phi) {
    const auto& v = poly.vertices();
    const std::size_t n = v.size();
    if (side >= n) throw InvalidParams("side index out of range");
    if (phi == 0.0) return poly;
    const Point a = v[side];
    const Point b = v[(side + 1) % n];
    const Point prev = v[(side + n - 1) % n];
    const Point next2 = v[(side + 2) % n];
    const Vec2 e_new = rotated(normalized(b - a), phi);
    std::vector<Point> out(v);
    if (pivot == SideEndpoint::Start) {
        const auto ib = detail::intersect_lines(b, next2 - b, a, e_new);
        if (!(ib.s < 1.0)) throw OutOfRange("rotate_about_vertex: endpoint crossed an adjacent vertex");
        if (!(ib.u > 0.0)) throw OutOfRange("rotate_about_vertex: side collapsed through the pivot");
        out[(side + 1) % n] = ib.point;
    } else {
        const auto ia = detail::intersect_lines(prev, a - prev, b, e_new);
        if (!(ia.s > 0.0)) throw OutOfRange("rotate_about_vertex: endpoint crossed an adjacent vertex");
        if (!(ia.u < 0.0)) throw OutOfRange("rotate_about_vertex: side collapsed through the pivot");
        out[side] = ia.point;
    }
    return detail::rebuild_perturbed(std::move(out), "rotate_about_vertex");
}

namespace detail {

// Tighten (lo, hi) so that c0 + k*t > 0 holds inside; requires c0 > 0.
inline void apply_linear_constraint(double c0, double k, double& lo, double& hi) {
    if (k == 0.0 || !std::isfinite(k)) return;
    const double t0 = -c0 / k;
    if (k > 0.0)
        lo = std::max(lo, t0);
    else
        hi = std::min(hi, t0);
}

// Tighten (lo, hi) to exclude a barrier parameter value.
inline void apply_barrier(double t0, double& lo, double& hi) {
    if (!std::isfinite(t0)) return;
    if (t0 > 0.0)
        hi = std::min(hi, t0);
    else if (t0 < 0.0)
        lo = std::max(lo, t0);
}

// Distance of an angle to the nearest of {0, pi} from below / above, i.e.
// how far theta may decrease (or increase) before hitting a degenerate value.
inline double angle_margin_down(double theta) { return theta > kPi ? theta - kPi : theta; }
inline double angle_margin_up(double theta) { return theta > kPi ? kTwoPi - theta : kPi - theta; }

}  // namespace detail

// Conservative open interval of parameters for which the move yields a valid
// polygon: analytic collision/angle events, a global cap (10% of the diameter
// for Slide/MoveVertex, half the smallest angle margin for Tilt), a 0.9
// shrink, then sampled construction checks that halve a bound on failure.
inline AdmissibleRange admissible_range(const Polygon& poly, MoveFamily family, std::size_t index) {
    const std::size_t n = poly.size();
    if (index >= n) throw InvalidParams("index out of range");
    const PolygonMetrics m = compute_metrics(poly);
    double lo = -std::numeric_limits<double>::infinity();
    double hi = std::numeric_limits<double>::infinity();

    switch (family) {
        case MoveFamily::Slide: {
            const double theta_a = m.interior_angles[index];
            const double theta_b = m.interior_angles[(index + 1) % n];
            const double sin_a = std::sin(theta_a);
            const double sin_b = std::sin(theta_b);
            const double len_prev = m.side_lengths[(index + n - 1) % n];
            const double len = m.side_lengths[index];
            const double len_next = m.side_lengths[(index + 1) % n];
            // side lengths stay positive: l_{i-1} + t/sin(theta_i), etc.
            detail::apply_linear_constraint(len_prev, 1.0 / sin_a, lo, hi);
            detail::apply_linear_constraint(len_next, 1.0 / sin_b, lo, hi);
            detail::apply_linear_constraint(len, std::cos(theta_a) / sin_a + std::cos(theta_b) / sin_b, lo, hi);
            const double cap = 0.1 * polygon_diameter(poly);
            lo = std::max(lo, -cap);
            hi = std::min(hi, cap);
            break;
        }
        case MoveFamily::Tilt: {
            const double theta_a = m.interior_angles[index];
            const double theta_b = m.interior_angles[(index + 1) % n];
            // theta_i - t and theta_{i+1} + t must avoid {0, pi, 2pi}
            hi = std::min({hi, detail::angle_margin_down(theta_a), detail::angle_margin_up(theta_b)});
            lo = std::max({lo, -detail::angle_margin_up(theta_a), -detail::angle_margin_down(theta_b)});
            // endpoint collision with the fixed neighbor vertices:
            // l_{i-1}(t) = l_{i-1} + (l_i/2) sin t / sin(theta_i - t) = 0
            const double len_prev = m.side_lengths[(index + n - 1) % n];
            const double len = m.side_lengths[index];
            const double len_next = m.side_lengths[(index + 1) % n];
            const double root_prev =
                std::atan2(-len_prev * std::sin(theta_a), 0.5 * len - len_prev * std::cos(theta_a));
            const double root_next =
                std::atan2(len_next * std::sin(theta_b), 0.5 * len - len_next * std::cos(theta_b));
            for (double root : {root_prev, root_prev - kPi, root_prev + kPi, root_next, root_next - kPi,
                                root_next + kPi})
                detail::apply_barrier(root, lo, hi);
            const double cap = 0.5 * std::min({detail::angle_margin_down(theta_a), detail::angle_margin_up(theta_a),
                                               detail::angle_margin_down(theta_b), detail::angle_margin_up(theta_b)});
            lo = std::max(lo, -cap);
            hi = std::min(hi, cap);
            break;
        }
        case MoveFamily::MoveVertex: {
            const auto& v = poly.vertices();
            const Point prev2 = v[(index + n - 2) % n];
            const Point prev = v[(index + n - 1) % n];
            const Point next = v[(index + 1) % n];
            const Point next2 = v[(index + 2) % n];
            const Vec2 u = normalized(next - prev);
            // the moving vertex may not cross the lines of the two flanking
            // fixed sides (interior angles of the neighbors hit 0/pi/2pi there)
            const Vec2 d1 = prev - prev2;
            const double f0 = cross(d1, v[index] - prev2);
            detail::apply_linear_constraint(std::abs(f0), (f0 >= 0.0 ? 1.0 : -1.0) * cross(d1, u), lo, hi);
            const Vec2 d2 = next2 - next;
            const double g0 = cross(d2, v[index] - next);
            detail::apply_linear_constraint(std::abs(g0), (g0 >= 0.0 ? 1.0 : -1.0) * cross(d2, u), lo, hi);
            const double cap = 0.1 * polygon_diameter(poly);
            lo = std::max(lo, -cap);
            hi = std::min(hi, cap);
            break;
        }
    }

    lo *= 0.9;
    hi *= 0.9;

    // Far-side collisions have no cheap closed form; verify by construction
    // and shrink until both a boundary sample and a midpoint sample pass.
    const auto construction_ok = [&](double t) {
        try {
            apply_move(poly, family, index, t);
            return true;
        } catch (const Error&) {
            return false;
        }
    };
    for (int pass = 0; pass < 80 && !(construction_ok(hi * 0.98) && construction_ok(hi * 0.5)); ++pass) hi *= 0.5;
    for (int pass = 0; pass < 80 && !(construction_ok(lo * 0.98) && construction_ok(lo * 0.5)); ++pass) lo *= 0.5;
    return {lo, hi};
}

// Admissible rotation interval for rotate_about_vertex, built the same way.
inline AdmissibleRange rotation_admissible_range(const Polygon& poly, std::size_t side, SideEndpoint pivot) {
    const std::size_t n = poly.size();
    if (side >= n) throw InvalidParams("side index out of range");
    const PolygonMetrics m = compute_metrics(poly);
    const double theta_a = m.interior_angles[side];
    const double theta_b = m.interior_angles[(side + 1) % n];
    double lo = std::max(-detail::angle_margin_up(theta_a), -detail::angle_margin_down(theta_b));
    double hi = std::min(detail::angle_margin_down(theta_a), detail::angle_margin_up(theta_b));
    const double cap = 0.5 * std::min({detail::angle_margin_down(theta_a), detail::angle_margin_up(theta_a),
                                       detail::angle_margin_down(theta_b), detail::angle_margin_up(theta_b)});
    lo = std::max(lo, -cap) * 0.9;
    hi = std::min(hi, cap) * 0.9;
    const auto construction_ok = [&](double phi) {
        try {
            rotate_about_vertex(poly, side, pivot, phi);
            return true;
        } catch (const Error&) {
            return false;
        }
    };
    for (int pass = 0; pass < 80 && !(construction_ok(hi * 0.98) && construction_ok(hi * 0.5)); ++pass) hi *= 0.5;
    for (int pass = 0; pass < 80 && !(construction_ok(lo * 0.98) && construction_ok(lo * 0.5)); ++pass) lo *= 0.5;
    return {lo, hi};
}

}  // namespace polystat
