#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numbers>
#include <utility>
#include <vector>

#include "polystat/errors.hpp"

namespace polystat {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Tolerances shared across the library.
inline constexpr double kAngleEps = 1e-9;       // straight-vertex rejection, radians
inline constexpr double kLengthEps = 1e-12;     // zero-side rejection, relative to bbox diagonal
inline constexpr double kPredicateEps = 1e-12;  // orientation-sign fallback, relative to bbox diagonal

struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    constexpr Vec2() = default;
    constexpr Vec2(double xx, double yy) : x(xx), y(yy) {}

    constexpr Vec2 operator+(Vec2 o) const { return {x + o.x, y + o.y}; }
    constexpr Vec2 operator-(Vec2 o) const { return {x - o.x, y - o.y}; }
    constexpr Vec2 operator*(double s) const { return {x * s, y * s}; }
    constexpr Vec2 operator/(double s) const { return {x / s, y / s}; }
    constexpr Vec2 operator-() const { return {-x, -y}; }
    constexpr bool operator==(const Vec2&) const = default;
};

using Point = Vec2;

constexpr Vec2 operator*(double s, Vec2 v) { return v * s; }

constexpr double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
constexpr double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }
constexpr double squared_norm(Vec2 v) { return dot(v, v); }
inline double norm(Vec2 v) { return std::sqrt(squared_norm(v)); }

inline Vec2 normalized(Vec2 v) { return v / norm(v); }

inline Vec2 rotated(Vec2 v, double angle) {
    const double c = std::cos(angle);
    const double s = std::sin(angle);
    return {c * v.x - s * v.y, s * v.x + c * v.y};
}

// Right-hand perpendicular; points outward for edges of a CCW boundary.
constexpr Vec2 outward_perp(Vec2 e) { return {e.y, -e.x}; }

// Unsigned angle between two nonzero vectors, in [0, pi].
inline double angle_between(Vec2 a, Vec2 b) {
    return std::atan2(std::abs(cross(a, b)), dot(a, b));
}

inline bool is_finite(Vec2 v) { return std::isfinite(v.x) && std::isfinite(v.y); }

inline double signed_area(const std::vector<Point>& verts) {
    const std::size_t n = verts.size();
    double twice = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const Point& a = verts[i];
        const Point& b = verts[(i + 1) % n];
        twice += a.x * b.y - b.x * a.y;
    }
    return 0.5 * twice;
}

inline double bbox_diagonal(const std::vector<Point>& verts) {
    double min_x = std::numeric_limits<double>::infinity(), max_x = -min_x;
    double min_y = min_x, max_y = max_x;
    for (const Point& p : verts) {
        min_x = std::min(min_x, p.x);
        max_x = std::max(max_x, p.x);
        min_y = std::min(min_y, p.y);
        max_y = std::max(max_y, p.y);
    }
    return norm({max_x - min_x, max_y - min_y});
}

// Interior angle at `cur` of a CCW boundary ... prev -> cur -> next ...;
// pi - (signed turning angle), so reflex vertices land in (pi, 2pi).
inline double interior_angle_at(Point prev, Point cur, Point next) {
    const Vec2 in = cur - prev;
    const Vec2 out = next - cur;
    return kPi - std::atan2(cross(in, out), dot(in, out));
}

// Sign of the turn a->b->c: +1 left, -1 right, 0 collinear within tolerance.
inline int orientation_sign(Point a, Point b, Point c, double eps_len) {
    const double det = cross(b - a, c - a);
    const double scale = std::max({norm(b - a), norm(c - a), norm(c - b)});
    if (std::abs(det) <= eps_len * scale) return 0;
    return det > 0.0 ? 1 : -1;
}

namespace detail {

inline bool within_segment_box(Point p, Point a, Point b, double eps) {
    return p.x >= std::min(a.x, b.x) - eps && p.x <= std::max(a.x, b.x) + eps &&
           p.y >= std::min(a.y, b.y) - eps && p.y <= std::max(a.y, b.y) + eps;
}

// Any contact between segments ab and cd counts, including endpoint touches.
inline bool segments_intersect(Point a, Point b, Point c, Point d, double eps) {
    const int d1 = orientation_sign(c, d, a, eps);
    const int d2 = orientation_sign(c, d, b, eps);
    const int d3 = orientation_sign(a, b, c, eps);
    const int d4 = orientation_sign(a, b, d, eps);
    if (d1 * d2 < 0 && d3 * d4 < 0) return true;
    if (d1 == 0 && within_segment_box(a, c, d, eps)) return true;
    if (d2 == 0 && within_segment_box(b, c, d, eps)) return true;
    if (d3 == 0 && within_segment_box(c, a, b, eps)) return true;
    if (d4 == 0 && within_segment_box(d, a, b, eps)) return true;
    return false;
}

}  // namespace detail

// True iff the closed chain is a simple curve: non-adjacent sides never meet,
// adjacent sides share exactly their common vertex. A straight vertex (angle
// pi) still yields a simple curve; the Polygon invariants reject it separately.
inline bool is_simple(const std::vector<Point>& verts) {
    const std::size_t n = verts.size();
    if (n < 3) return false;
    const double diag = bbox_diagonal(verts);
    if (!(diag > 0.0)) return false;
    const double eps = kPredicateEps * diag;
    for (std::size_t i = 0; i < n; ++i) {
        const Point a = verts[i];
        const Point b = verts[(i + 1) % n];
        for (std::size_t j = i + 1; j < n; ++j) {
            const Point c = verts[j];
            const Point d = verts[(j + 1) % n];
            const bool consecutive = (j == i + 1) || (i == 0 && j == n - 1);
            if (consecutive) {
                // Shared endpoint: sides may not fold back onto each other.
                Point shared, p, q;
                if (j == i + 1) {
                    shared = b, p = a, q = d;
                } else {
                    shared = a, p = b, q = c;
                }
                if (orientation_sign(shared, p, q, eps) == 0 && dot(p - shared, q - shared) > 0.0)
                    return false;
            } else if (detail::segments_intersect(a, b, c, d, eps)) {
                return false;
            }
        }
    }
    return true;
}

// Simple, positively oriented N-gon (N >= 3) with no straight vertex.
// Construction normalizes orientation to CCW (reversing the input silently)
// and rejects anything violating the invariants. Immutable afterwards.
class Polygon {
public:
    static Polygon from_vertices(std::vector<Point> verts) {
        const std::size_t n = verts.size();
        if (n < 3) throw InvalidPolygon("polygon needs at least 3 vertices");
        for (const Point& p : verts)
            if (!is_finite(p)) throw InvalidPolygon("non-finite vertex coordinate");
        const double diag = bbox_diagonal(verts);
        if (!(diag > 0.0)) throw InvalidPolygon("all vertices coincide");
        for (std::size_t i = 0; i < n; ++i)
            if (norm(verts[(i + 1) % n] - verts[i]) <= kLengthEps * diag)
                throw InvalidPolygon("zero-length side");
        const double area = signed_area(verts);
        if (area < 0.0) std::reverse(verts.begin(), verts.end());
        if (std::abs(area) <= kLengthEps * diag * diag)
            throw InvalidPolygon("degenerate enclosed area");
        if (!is_simple(verts)) throw InvalidPolygon("boundary is not a simple closed curve");
        for (std::size_t i = 0; i < n; ++i) {
            const double theta = interior_angle_at(verts[(i + n - 1) % n], verts[i], verts[(i + 1) % n]);
            if (theta <= kAngleEps || theta >= kTwoPi - kAngleEps || std::abs(theta - kPi) <= kAngleEps)
                throw DegenerateVertex("straight or null interior angle");
        }
        return Polygon(std::move(verts));
    }

    const std::vector<Point>& vertices() const { return verts_; }
    std::size_t size() const { return verts_.size(); }
    const Point& operator[](std::size_t i) const { return verts_[i]; }

    Polygon scaled(double factor) const {
        if (!(factor > 0.0) || !std::isfinite(factor)) throw InvalidParams("scale factor must be positive");
        std::vector<Point> out(verts_);
        for (Point& p : out) p = p * factor;
        return Polygon(std::move(out));
    }

    Polygon translated(Vec2 offset) const {
        std::vector<Point> out(verts_);
        for (Point& p : out) p = p + offset;
        return Polygon(std::move(out));
    }

    Polygon rotated_by(double angle) const {
        std::vector<Point> out(verts_);
        for (Point& p : out) p = rotated(p, angle);
        return Polygon(std::move(out));
    }

private:
    explicit Polygon(std::vector<Point> verts) : verts_(std::move(verts)) {}
    std::vector<Point> verts_;
};

// Per-side and per-vertex quantities of a polygon, plus the global
// perimeter, area and isoperimetric quotient per/sqrt(area).
//
// Side i joins vertex i and vertex i+1 (indices mod N). diag_angles_prev[i]
// is measured at vertex i-1 between the diagonal toward vertex i+1 and the
// side toward vertex i; diag_angles_next[i] is its mirror at vertex i+1.
struct PolygonMetrics {
    std::vector<double> side_lengths;
    std::vector<Vec2> outward_normals;
    std::vector<Point> midpoints;
    std::vector<double> interior_angles;   // (0,pi) u (pi,2pi)
    std::vector<double> diag_angles_prev;  // (0,pi)
    std::vector<double> diag_angles_next;  // (0,pi)
    double perimeter = 0.0;
    double area = 0.0;
    double quotient = 0.0;
};

inline PolygonMetrics compute_metrics(const Polygon& poly) {
    const auto& v = poly.vertices();
    const std::size_t n = v.size();
    PolygonMetrics m;
    m.side_lengths.reserve(n);
    m.outward_normals.reserve(n);
    m.midpoints.reserve(n);
    m.interior_angles.reserve(n);
    m.diag_angles_prev.reserve(n);
    m.diag_angles_next.reserve(n);

    for (std::size_t i = 0; i < n; ++i) {
        const Point a = v[i];
        const Point b = v[(i + 1) % n];
        const Vec2 e = b - a;
        const double len = norm(e);
        m.side_lengths.push_back(len);
        m.outward_normals.push_back(outward_perp(e / len));
        m.midpoints.push_back((a + b) * 0.5);
        m.perimeter += len;
    }

    for (std::size_t i = 0; i < n; ++i) {
        const Point prev = v[(i + n - 1) % n];
        const Point next = v[(i + 1) % n];
        const double theta = interior_angle_at(prev, v[i], next);
        if (theta <= kAngleEps || theta >= kTwoPi - kAngleEps || std::abs(theta - kPi) <= kAngleEps)
            throw DegenerateVertex("straight or null interior angle");
        m.interior_angles.push_back(theta);

        const Vec2 diag = next - prev;
        m.diag_angles_prev.push_back(angle_between(diag, v[i] - prev));
        m.diag_angles_next.push_back(angle_between(-diag, v[i] - next));
    }

    m.area = signed_area(v);
    m.quotient = m.perimeter / std::sqrt(m.area);
    return m;
}

// Largest pairwise vertex distance.
inline double polygon_diameter(const Polygon& poly) {
    const auto& v = poly.vertices();
    double best = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i)
        for (std::size_t j = i + 1; j < v.size(); ++j)
            best = std::max(best, norm(v[j] - v[i]));
    return best;
}

namespace detail {

// Feature sequence used by similarity_distance: per index the pair
// (side length / perimeter, interior angle).
inline std::vector<std::pair<double, double>> shape_features(const Polygon& poly) {
    const PolygonMetrics m = compute_metrics(poly);
    std::vector<std::pair<double, double>> f;
    f.reserve(poly.size());
    for (std::size_t i = 0; i < poly.size(); ++i)
        f.emplace_back(m.side_lengths[i] / m.perimeter, m.interior_angles[i]);
    return f;
}

inline double cyclic_feature_gap(const std::vector<std::pair<double, double>>& a,
                                 const std::vector<std::pair<double, double>>& b) {
    const std::size_t n = a.size();
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t shift = 0; shift < n; ++shift) {
        double worst = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const auto& [la, ta] = a[i];
            const auto& [lb, tb] = b[(i + shift) % n];
            worst = std::max({worst, std::abs(la - lb), std::abs(ta - tb)});
        }
        best = std::min(best, worst);
    }
    return best;
}

}  // namespace detail

// Similarity-invariant distance: zero iff the polygons coincide up to
// translation, rotation, reflection, uniform scaling and cyclic relabeling.
// Minimizes the max-norm gap between normalized (length, angle) sequences
// over all cyclic shifts and over reflection of the second argument.
inline double similarity_distance(const Polygon& p, const Polygon& q) {
    if (p.size() != q.size()) throw MismatchedN("polygons have different vertex counts");
    const auto fp = detail::shape_features(p);

    std::vector<Point> mirrored(q.vertices());
    for (Point& pt : mirrored) pt.x = -pt.x;
    const Polygon q_mirror = Polygon::from_vertices(std::move(mirrored));

    return std::min(detail::cyclic_feature_gap(fp, detail::shape_features(q)),
                    detail::cyclic_feature_gap(fp, detail::shape_features(q_mirror)));
}

}  // namespace polystat
