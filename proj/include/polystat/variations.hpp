#pragma once

#include <algorithm>
#include <vector>

#include "polystat/geometry.hpp"
#include "polystat/perturbations.hpp"

namespace polystat {

// Default tolerance for stationarity flags. Residuals are evaluated on the
// perimeter-normalized polygon, so this is dimensionless.
inline constexpr double kDefaultStatTol = 1e-8;

// cot(theta/2), the numerically stable form of csc(theta) + cot(theta).
// Strictly decreasing on (0, 2pi), zero at pi, negative at reflex angles.
inline double half_angle_cot(double theta) {
    if (!(theta > kAngleEps && theta < kTwoPi - kAngleEps))
        throw DomainError("angle outside (0, 2pi)");
    return std::cos(0.5 * theta) / std::sin(0.5 * theta);
}

// d/dt at t=0 of (perimeter, area) along a move family.
struct FirstVariation {
    double d_perimeter;
    double d_area;
};

inline FirstVariation first_variation(const PolygonMetrics& m, MoveFamily family, std::size_t index) {
    const std::size_t n = m.side_lengths.size();
    if (index >= n) throw InvalidParams("index out of range");
    switch (family) {
        case MoveFamily::Slide: {
            const double pa = half_angle_cot(m.interior_angles[index]);
            const double pb = half_angle_cot(m.interior_angles[(index + 1) % n]);
            return {pa + pb, m.side_lengths[index]};
        }
        case MoveFamily::Tilt: {
            const double pa = half_angle_cot(m.interior_angles[index]);
            const double pb = half_angle_cot(m.interior_angles[(index + 1) % n]);
            return {0.5 * m.side_lengths[index] * (pa - pb), 0.0};
        }
        case MoveFamily::MoveVertex: {
            return {std::cos(m.diag_angles_prev[index]) - std::cos(m.diag_angles_next[index]), 0.0};
        }
    }
    throw InvalidParams("unknown move family");
}

inline FirstVariation first_variation(const Polygon& poly, MoveFamily family, std::size_t index) {
    return first_variation(compute_metrics(poly), family, index);
}

// d/dt at t=0 of perimeter / sqrt(area) along a move family. Vanishes iff
// the corresponding stationarity residual vanishes.
inline double quotient_derivative(const PolygonMetrics& m, MoveFamily family, std::size_t index) {
    const FirstVariation fv = first_variation(m, family, index);
    const double sqrt_area = std::sqrt(m.area);
    return (fv.d_perimeter * sqrt_area - m.perimeter * fv.d_area / (2.0 * sqrt_area)) / m.area;
}

inline double quotient_derivative(const Polygon& poly, MoveFamily family, std::size_t index) {
    return quotient_derivative(compute_metrics(poly), family, index);
}

// Stationarity residuals of the three move families, evaluated on the
// perimeter-normalized polygon so the flags are scale-free:
//   slide[i] = (cot(theta_i/2) + cot(theta_{i+1}/2)) / l_i - per / (2 area)
//   tilt[i]  = cot(theta_i/2) - cot(theta_{i+1}/2)
//   move[i]  = cos(alpha_i at previous vertex) - cos(alpha_i at next vertex)
// All three vanish simultaneously exactly on regular polygons; tilt alone
// characterizes equiangular, move alone characterizes equilateral.
struct ResidualReport {
    std::vector<double> slide;  // per side
    std::vector<double> tilt;   // per side
    std::vector<double> move;   // per vertex
    double max_abs_slide = 0.0;
    double max_abs_tilt = 0.0;
    double max_abs_move = 0.0;
    double stat_tol = kDefaultStatTol;
    bool slide_stationary = false;
    bool tilt_stationary = false;
    bool move_stationary = false;
    bool equiangular = false;
    bool equilateral = false;
    bool regular = false;
};

inline ResidualReport residuals(const Polygon& poly, double stat_tol = kDefaultStatTol) {
    if (!(stat_tol > 0.0)) throw InvalidParams("stat_tol must be positive");
    const double perimeter = compute_metrics(poly).perimeter;
    const PolygonMetrics m = compute_metrics(poly.scaled(1.0 / perimeter));
    const std::size_t n = m.side_lengths.size();

    ResidualReport rep;
    rep.stat_tol = stat_tol;
    rep.slide.reserve(n);
    rep.tilt.reserve(n);
    rep.move.reserve(n);

    const double pressure = m.perimeter / (2.0 * m.area);
    std::vector<double> psi(n);
    for (std::size_t i = 0; i < n; ++i) psi[i] = half_angle_cot(m.interior_angles[i]);
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t j = (i + 1) % n;
        rep.slide.push_back((psi[i] + psi[j]) / m.side_lengths[i] - pressure);
        rep.tilt.push_back(psi[i] - psi[j]);
        rep.move.push_back(std::cos(m.diag_angles_prev[i]) - std::cos(m.diag_angles_next[i]));
    }
    for (std::size_t i = 0; i < n; ++i) {
        rep.max_abs_slide = std::max(rep.max_abs_slide, std::abs(rep.slide[i]));
        rep.max_abs_tilt = std::max(rep.max_abs_tilt, std::abs(rep.tilt[i]));
        rep.max_abs_move = std::max(rep.max_abs_move, std::abs(rep.move[i]));
    }
    rep.slide_stationary = rep.max_abs_slide < stat_tol;
    rep.tilt_stationary = rep.max_abs_tilt < stat_tol;
    rep.move_stationary = rep.max_abs_move < stat_tol;
    rep.equiangular = rep.tilt_stationary;
    rep.equilateral = rep.move_stationary;
    rep.regular = rep.equiangular && rep.equilateral;
    return rep;
}

// Central finite differences of measured perimeter/area/quotient through the
// exact move constructors; the independent check of the analytic variations.
struct FdDerivative {
    double d_perimeter;
    double d_area;
    double d_quotient;
};

inline FdDerivative fd_derivative(const Polygon& poly, MoveFamily family, std::size_t index, double h) {
    if (!(h > 0.0)) throw InvalidParams("step must be positive");
    const PolygonMetrics plus = compute_metrics(apply_move(poly, family, index, h));
    const PolygonMetrics minus = compute_metrics(apply_move(poly, family, index, -h));
    return {(plus.perimeter - minus.perimeter) / (2.0 * h), (plus.area - minus.area) / (2.0 * h),
            (plus.quotient - minus.quotient) / (2.0 * h)};
}

enum class StationarityClass { Regular, Equiangular, Equilateral, SlideStationaryOnly, NonStationary };

inline const char* to_string(StationarityClass c) {
    switch (c) {
        case StationarityClass::Regular: return "regular";
        case StationarityClass::Equiangular: return "equiangular";
        case StationarityClass::Equilateral: return "equilateral";
        case StationarityClass::SlideStationaryOnly: return "slide_stationary_only";
        case StationarityClass::NonStationary: return "non_stationary";
    }
    return "unknown";
}

// Either of the pairs (slide, tilt) or (tilt, move) forces regularity; the
// remaining cases fall through in fixed precedence.
inline StationarityClass classify(const ResidualReport& rep) {
    if ((rep.slide_stationary && rep.tilt_stationary) || (rep.tilt_stationary && rep.move_stationary))
        return StationarityClass::Regular;
    if (rep.tilt_stationary) return StationarityClass::Equiangular;
    if (rep.move_stationary) return StationarityClass::Equilateral;
    if (rep.slide_stationary) return StationarityClass::SlideStationaryOnly;
    return StationarityClass::NonStationary;
}

inline StationarityClass classify(const Polygon& poly, double stat_tol = kDefaultStatTol) {
    return classify(residuals(poly, stat_tol));
}

}  // namespace polystat
