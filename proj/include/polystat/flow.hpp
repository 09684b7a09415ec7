#pragma once

#include <array>
#include <cstdint>
#include <future>
#include <optional>
#include <vector>

#include "polystat/generators.hpp"
#include "polystat/variations.hpp"

namespace polystat {

// Coordinate-descent settings for minimizing per/sqrt(area) over single
// moves. Steps and tolerances refer to the polygon renormalized to unit
// perimeter, so they are scale-free.
struct FlowConfig {
    std::vector<MoveFamily> families{MoveFamily::Slide, MoveFamily::Tilt};
    double step0 = 0.1;
    double shrink = 0.5;
    double armijo_c = 1e-4;
    double stat_tol = 1e-9;
    std::size_t max_iters = 100000;
    std::size_t record_every = 1;
    bool record_polygons = false;
};

enum class FlowOutcome { Converged, MaxIters, Stalled };

inline const char* to_string(FlowOutcome o) {
    switch (o) {
        case FlowOutcome::Converged: return "converged";
        case FlowOutcome::MaxIters: return "max_iters";
        case FlowOutcome::Stalled: return "stalled";
    }
    return "unknown";
}

struct TraceRecord {
    std::size_t iteration;
    double quotient;
    std::array<double, 3> max_abs_derivative;  // indexed by MoveFamily
    std::optional<Polygon> polygon;
};

struct FlowTrace {
    std::vector<TraceRecord> records;
    FlowOutcome outcome = FlowOutcome::MaxIters;
    std::optional<StationarityClass> classification;
    std::size_t iterations = 0;
};

struct FlowResult {
    Polygon polygon;
    FlowTrace trace;
};

namespace detail {

struct MoveDerivative {
    MoveFamily family;
    std::size_t index;
    double derivative;
};

struct DerivativeScan {
    MoveDerivative steepest{MoveFamily::Slide, 0, 0.0};
    double max_abs = 0.0;
    std::array<double, 3> per_family{0.0, 0.0, 0.0};
    std::vector<MoveDerivative> all;
};

// Evaluate the quotient derivative of every enabled move. The steepest move
// is the first strict maximum in family order Slide < Tilt < MoveVertex,
// then lowest index, which makes the descent deterministic.
inline DerivativeScan scan_derivatives(const PolygonMetrics& m, const std::vector<MoveFamily>& families) {
    DerivativeScan scan;
    const std::size_t n = m.side_lengths.size();
    scan.all.reserve(families.size() * n);
    for (MoveFamily family : families) {
        for (std::size_t i = 0; i < n; ++i) {
            const double d = quotient_derivative(m, family, i);
            scan.all.push_back({family, i, d});
            const double a = std::abs(d);
            auto& fam_max = scan.per_family[static_cast<std::size_t>(family)];
            fam_max = std::max(fam_max, a);
            if (a > scan.max_abs) {
                scan.max_abs = a;
                scan.steepest = {family, i, d};
            }
        }
    }
    return scan;
}

inline Polygon normalize_perimeter(const Polygon& poly, const PolygonMetrics& m) {
    return poly.scaled(1.0 / m.perimeter);
}

inline std::vector<MoveFamily> canonical_families(std::vector<MoveFamily> families) {
    std::sort(families.begin(), families.end(),
              [](MoveFamily a, MoveFamily b) { return static_cast<int>(a) < static_cast<int>(b); });
    families.erase(std::unique(families.begin(), families.end()), families.end());
    return families;
}

}  // namespace detail

// Area-constrained perimeter descent. Each iteration renormalizes to unit
// perimeter, picks the single enabled move with the largest quotient
// derivative and backtracks from step0 until the Armijo decrease holds.
// Converged means max |quotient derivative| < stat_tol.
//
// Backtracking on Q alone cannot certify decreases below the floating-point
// resolution of Q (about 1e-7 in derivative norm). Once the derivative is
// small, or the line search runs out of representable decrease, the loop
// switches to Newton sweeps on the analytic derivatives, which reach the
// stat_tol scale. Q changes by at most a few ulps per polish sweep.
inline FlowResult run_flow(const Polygon& start, const FlowConfig& cfg = {}) {
    if (cfg.families.empty()) throw InvalidParams("flow needs at least one move family");
    if (!(cfg.step0 > 0.0)) throw InvalidParams("step0 must be positive");
    if (!(cfg.shrink > 0.0 && cfg.shrink < 1.0)) throw InvalidParams("shrink must lie in (0,1)");
    if (!(cfg.armijo_c > 0.0 && cfg.armijo_c < 1.0)) throw InvalidParams("armijo_c must lie in (0,1)");
    if (!(cfg.stat_tol > 0.0)) throw InvalidParams("stat_tol must be positive");
    if (cfg.record_every == 0) throw InvalidParams("record_every must be at least 1");
    const std::vector<MoveFamily> families = detail::canonical_families(cfg.families);

    constexpr double kPolishEnter = 1e-5;
    constexpr double kStepFloor = 1e-14;

    Polygon current = [&] {
        try {
            return detail::normalize_perimeter(start, compute_metrics(start));
        } catch (const Error& e) {
            throw InvalidStart(std::string("flow start rejected: ") + e.what());
        }
    }();
    PolygonMetrics metrics = compute_metrics(current);
    detail::DerivativeScan scan = detail::scan_derivatives(metrics, families);

    FlowTrace trace;
    std::size_t iter = 0;
    const auto record = [&](bool force) {
        if (!force && iter % cfg.record_every != 0) return;
        if (!trace.records.empty() && trace.records.back().iteration == iter) return;
        trace.records.push_back({iter, metrics.quotient, scan.per_family,
                                 cfg.record_polygons ? std::optional<Polygon>(current) : std::nullopt});
    };

    // Newton refinement on the analytic derivative: Gauss-Seidel sweeps that
    // solve each enabled coordinate's 1-D stationarity equation in turn.
    // Each accepted solve must shrink that coordinate's own derivative; a
    // sweep counts as progress when the overall derivative norm drops.
    const auto polish = [&]() -> bool {
        double best_max = scan.max_abs;
        int flat_sweeps = 0;
        for (int sweep = 0; sweep < 200; ++sweep) {
            if (scan.max_abs < cfg.stat_tol) return true;
            for (MoveFamily family : families) {
                const std::size_t n = current.size();
                for (std::size_t i = 0; i < n; ++i) {
                    const double d = quotient_derivative(metrics, family, i);
                    if (std::abs(d) < 0.2 * cfg.stat_tol) continue;
                    AdmissibleRange range{};
                    try {
                        range = admissible_range(current, family, i);
                    } catch (const Error&) {
                        continue;
                    }
                    const double probe = std::min(1e-5, 0.45 * std::min(-range.lo, range.hi));
                    if (!(probe > 0.0)) continue;
                    double curvature = 0.0;
                    try {
                        const double g_plus = quotient_derivative(apply_move(current, family, i, probe), family, i);
                        const double g_minus = quotient_derivative(apply_move(current, family, i, -probe), family, i);
                        curvature = (g_plus - g_minus) / (2.0 * probe);
                    } catch (const Error&) {
                        continue;
                    }
                    if (!(curvature > 1e-9)) continue;
                    double t = std::clamp(-d / curvature, 0.9 * range.lo, 0.9 * range.hi);
                    for (int damp = 0; damp < 12 && t != 0.0; ++damp, t *= 0.5) {
                        std::optional<Polygon> trial;
                        try {
                            trial = apply_move(current, family, i, t);
                        } catch (const Error&) {
                            continue;
                        }
                        const Polygon next = detail::normalize_perimeter(*trial, compute_metrics(*trial));
                        const PolygonMetrics next_metrics = compute_metrics(next);
                        if (std::abs(quotient_derivative(next_metrics, family, i)) < std::abs(d)) {
                            current = next;
                            metrics = next_metrics;
                            break;
                        }
                    }
                }
            }
            scan = detail::scan_derivatives(metrics, families);
            ++iter;
            record(false);
            if (scan.max_abs < best_max * 0.999) {
                best_max = scan.max_abs;
                flat_sweeps = 0;
            } else if (++flat_sweeps >= 5) {
                return scan.max_abs < cfg.stat_tol;
            }
        }
        return scan.max_abs < cfg.stat_tol;
    };

    for (;;) {
        record(false);
        if (scan.max_abs < cfg.stat_tol) {
            trace.outcome = FlowOutcome::Converged;
            break;
        }
        if (iter >= cfg.max_iters) {
            trace.outcome = FlowOutcome::MaxIters;
            break;
        }

        bool stepped = false;
        if (scan.max_abs >= kPolishEnter) {
            // Steepest move first; if its whole backtracking line fails (a
            // blocked direction near a collision boundary, where the plain
            // scheme would stall), fall through to the remaining moves in
            // decreasing |derivative| order. Deterministic either way.
            std::vector<detail::MoveDerivative> order = scan.all;
            std::stable_sort(order.begin(), order.end(), [](const auto& a, const auto& b) {
                return std::abs(a.derivative) > std::abs(b.derivative);
            });
            for (const detail::MoveDerivative& move : order) {
                if (std::abs(move.derivative) < cfg.stat_tol) break;
                const AdmissibleRange range = admissible_range(current, move.family, move.index);
                const double bound = move.derivative > 0.0 ? -range.lo : range.hi;
                double step = std::min(cfg.step0, 0.9 * bound);
                while (step > kStepFloor) {
                    const double t = move.derivative > 0.0 ? -step : step;
                    std::optional<Polygon> trial;
                    try {
                        trial = apply_move(current, move.family, move.index, t);
                    } catch (const Error&) {
                        step *= cfg.shrink;
                        continue;
                    }
                    const Polygon next = detail::normalize_perimeter(*trial, compute_metrics(*trial));
                    const PolygonMetrics next_metrics = compute_metrics(next);
                    // strict inequality keeps boundary stalls from crawling
                    // on representable-tie steps
                    if (next_metrics.quotient < metrics.quotient &&
                        next_metrics.quotient <=
                            metrics.quotient - cfg.armijo_c * step * std::abs(move.derivative)) {
                        current = next;
                        metrics = next_metrics;
                        stepped = true;
                        break;
                    }
                    step *= cfg.shrink;
                }
                if (stepped) break;
            }
        }

        if (stepped) {
            ++iter;
            scan = detail::scan_derivatives(metrics, families);
            continue;
        }

        trace.outcome = polish() ? FlowOutcome::Converged : FlowOutcome::Stalled;
        break;
    }

    record(true);
    trace.iterations = iter;
    if (trace.outcome == FlowOutcome::Converged) trace.classification = classify(current);
    return {current, trace};
}

// Batch verification: flow num_seeds random convex n-gons toward the regular
// target and look for stationary-yet-irregular final polygons.
struct TheoremVerification {
    int n = 0;
    std::size_t seeds = 0;
    std::size_t converged = 0;
    std::size_t stalled = 0;
    std::size_t hit_max_iters = 0;
    double convergence_fraction = 0.0;
    double max_similarity_converged = 0.0;  // worst distance to regular among converged runs
    std::size_t counterexamples = 0;        // pair-stationary but far from regular (expected 0)
    std::optional<Polygon> counterexample;
};

namespace detail {

struct SeedOutcome {
    FlowOutcome outcome;
    double similarity;
    bool pair_stationary;
    std::optional<Polygon> final_polygon;
};

inline SeedOutcome run_theorem_seed(int n, std::uint64_t seed, const FlowConfig& cfg, const Polygon& reference) {
    const Polygon start = make_random_convex(n, seed);
    FlowResult result = run_flow(start, cfg);
    const double similarity = similarity_distance(result.polygon, reference);
    const ResidualReport rep = residuals(result.polygon);
    const bool pair = (rep.slide_stationary && rep.tilt_stationary) ||
                      (rep.tilt_stationary && rep.move_stationary);
    SeedOutcome out{result.trace.outcome, similarity, pair, std::nullopt};
    if (pair && similarity > 1e-3) out.final_polygon = result.polygon;
    return out;
}

}  // namespace detail

inline TheoremVerification verify_theorem(int n, std::size_t num_seeds, const FlowConfig& cfg = {},
                                          std::uint64_t seed_base = 0, unsigned threads = 1) {
    if (n < 3) throw InvalidParams("theorem verification needs n >= 3");
    const Polygon reference = make_regular(n, 1.0);

    std::vector<detail::SeedOutcome> outcomes;
    outcomes.reserve(num_seeds);
    if (threads <= 1 || num_seeds < 2) {
        for (std::size_t s = 0; s < num_seeds; ++s)
            outcomes.push_back(detail::run_theorem_seed(n, seed_base + s, cfg, reference));
    } else {
        // Independent runs; chunks joined in seed order keep the result
        // identical to the sequential path.
        const std::size_t workers = std::min<std::size_t>(threads, num_seeds);
        std::vector<std::future<std::vector<detail::SeedOutcome>>> futures;
        futures.reserve(workers);
        for (std::size_t w = 0; w < workers; ++w) {
            const std::size_t begin = num_seeds * w / workers;
            const std::size_t end = num_seeds * (w + 1) / workers;
            futures.push_back(std::async(std::launch::async, [&, begin, end] {
                std::vector<detail::SeedOutcome> chunk;
                chunk.reserve(end - begin);
                for (std::size_t s = begin; s < end; ++s)
                    chunk.push_back(detail::run_theorem_seed(n, seed_base + s, cfg, reference));
                return chunk;
            }));
        }
        for (auto& f : futures)
            for (auto& o : f.get()) outcomes.push_back(std::move(o));
    }

    TheoremVerification summary;
    summary.n = n;
    summary.seeds = num_seeds;
    for (const auto& o : outcomes) {
        switch (o.outcome) {
            case FlowOutcome::Converged:
                ++summary.converged;
                summary.max_similarity_converged = std::max(summary.max_similarity_converged, o.similarity);
                break;
            case FlowOutcome::Stalled: ++summary.stalled; break;
            case FlowOutcome::MaxIters: ++summary.hit_max_iters; break;
        }
        if (o.final_polygon) {
            ++summary.counterexamples;
            if (!summary.counterexample) summary.counterexample = o.final_polygon;
        }
    }
    if (num_seeds > 0)
        summary.convergence_fraction = static_cast<double>(summary.converged) / static_cast<double>(num_seeds);
    return summary;
}

}  // namespace polystat
