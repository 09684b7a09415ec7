#include <catch2/catch_amalgamated.hpp>

#include "polystat/flow.hpp"
#include "support.hpp"

using namespace polystat;
using Catch::Matchers::WithinAbs;

TEST_CASE("flow config validation") {
    const Polygon square = make_regular(4, 1.0);
    FlowConfig cfg;
    cfg.families.clear();
    CHECK_THROWS_AS(run_flow(square, cfg), InvalidParams);
    cfg = FlowConfig{};
    cfg.shrink = 1.5;
    CHECK_THROWS_AS(run_flow(square, cfg), InvalidParams);
    cfg = FlowConfig{};
    cfg.step0 = -1.0;
    CHECK_THROWS_AS(run_flow(square, cfg), InvalidParams);
}

TEST_CASE("a regular octagon is already stationary") {
    const Polygon octagon = make_regular(8, 1.0);
    const FlowResult result = run_flow(octagon);
    CHECK(result.trace.outcome == FlowOutcome::Converged);
    CHECK(result.trace.iterations == 0);
    CHECK(similarity_distance(result.polygon, octagon) < 1e-10);
    REQUIRE(result.trace.classification.has_value());
    CHECK(*result.trace.classification == StationarityClass::Regular);
}

TEST_CASE("regular polygons are fixed points of the flow") {
    for (int n : {3, 5, 7, 10}) {
        const Polygon reg = make_regular(n, 1.0);
        const double q0 = compute_metrics(reg).quotient;
        const FlowResult result = run_flow(reg);
        CHECK(result.trace.outcome == FlowOutcome::Converged);
        CHECK(std::abs(compute_metrics(result.polygon).quotient - q0) < 1e-12);
    }
}

TEST_CASE("a 1x2 rectangle flows to the square") {
    const Polygon rect = make_rectangle(2.0, 1.0);
    const FlowResult result = run_flow(rect);
    REQUIRE(result.trace.outcome == FlowOutcome::Converged);
    CHECK(similarity_distance(result.polygon, make_regular(4, 1.0)) < 1e-6);
    CHECK_THAT(compute_metrics(result.polygon).quotient, WithinAbs(4.0, 1e-8));
    REQUIRE(result.trace.classification.has_value());
    CHECK(*result.trace.classification == StationarityClass::Regular);
}

TEST_CASE("trace quotients never increase and respect the lower bound") {
    testsupport::Rng rng(4242);
    for (int n : {4, 5, 6}) {
        const double regular_q = compute_metrics(make_regular(n, 1.0)).quotient;
        for (int k = 0; k < 5; ++k) {
            const Polygon start = make_random_convex(n, rng.raw());
            const FlowResult result = run_flow(start);
            const auto& records = result.trace.records;
            REQUIRE(!records.empty());
            // non-increasing per record; the Newton polish may wobble Q by ulps
            for (std::size_t i = 0; i + 1 < records.size(); ++i)
                CHECK(records[i + 1].quotient <= records[i].quotient + 1e-12);
            for (const TraceRecord& rec : records) CHECK(rec.quotient >= regular_q - 1e-9);
            // a generic start must make net strict progress
            CHECK(records.back().quotient <= records.front().quotient);
            if (records.front().quotient - regular_q > 1e-3)
                CHECK(records.back().quotient < records.front().quotient);
        }
    }
}

TEST_CASE("a descent into the degenerate boundary stalls honestly") {
    // Strongly non-convex starts can descend toward a collapsed side (the
    // polygon class is not closed); every single move is then blocked and
    // the flow must report Stalled with Q still monotone and above the
    // regular lower bound.
    const Polygon start = make_perturbed_regular(6, 0.35, 23);
    const double regular_q = compute_metrics(make_regular(6, 1.0)).quotient;
    const FlowResult result = run_flow(start);
    CHECK(result.trace.outcome == FlowOutcome::Stalled);
    const auto& records = result.trace.records;
    for (std::size_t i = 0; i + 1 < records.size(); ++i)
        CHECK(records[i + 1].quotient <= records[i].quotient + 1e-12);
    CHECK(compute_metrics(result.polygon).quotient >= regular_q - 1e-9);
}

TEST_CASE("an exhausted iteration budget reports MaxIters") {
    FlowConfig cfg;
    cfg.max_iters = 3;
    const FlowResult result = run_flow(make_random_convex(7, 5), cfg);
    CHECK(result.trace.outcome == FlowOutcome::MaxIters);
    CHECK(result.trace.iterations == 3);
    CHECK_FALSE(result.trace.classification.has_value());
}

TEST_CASE("the flow is deterministic") {
    const Polygon start = make_random_convex(6, 31);
    const FlowResult a = run_flow(start);
    const FlowResult b = run_flow(start);
    REQUIRE(a.trace.records.size() == b.trace.records.size());
    for (std::size_t i = 0; i < a.trace.records.size(); ++i) {
        CHECK(a.trace.records[i].iteration == b.trace.records[i].iteration);
        CHECK(a.trace.records[i].quotient == b.trace.records[i].quotient);
    }
    REQUIRE(a.polygon.size() == b.polygon.size());
    for (std::size_t i = 0; i < a.polygon.size(); ++i) CHECK(a.polygon[i] == b.polygon[i]);
}

TEST_CASE("random convex hexagons reach the regular target") {
    const double target = compute_metrics(make_regular(6, 1.0)).quotient;
    int converged = 0;
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const FlowResult result = run_flow(make_random_convex(6, seed));
        if (result.trace.outcome != FlowOutcome::Converged) continue;
        ++converged;
        CHECK_THAT(compute_metrics(result.polygon).quotient, WithinAbs(target, 1e-6));
        CHECK(similarity_distance(result.polygon, make_regular(6, 1.0)) < 1e-5);
    }
    CHECK(converged >= 9);
}

TEST_CASE("tilt-and-move family pair also drives to regular") {
    FlowConfig cfg;
    cfg.families = {MoveFamily::Tilt, MoveFamily::MoveVertex};
    const FlowResult result = run_flow(make_random_convex(5, 77), cfg);
    REQUIRE(result.trace.outcome == FlowOutcome::Converged);
    CHECK(similarity_distance(result.polygon, make_regular(5, 1.0)) < 1e-5);
}

TEST_CASE("verify_theorem: tilt alone suffices for triangles") {
    FlowConfig cfg;
    cfg.families = {MoveFamily::Tilt};
    const TheoremVerification summary = verify_theorem(3, 25, cfg);
    CHECK(summary.converged == 25);
    CHECK(summary.max_similarity_converged < 1e-5);
    CHECK(summary.counterexamples == 0);
}

TEST_CASE("verify_theorem finds no counterexamples for squares") {
    const TheoremVerification summary = verify_theorem(4, 25);
    CHECK(summary.counterexamples == 0);
    CHECK(summary.convergence_fraction >= 0.95);
    CHECK(summary.max_similarity_converged < 1e-5);
}

TEST_CASE("verify_theorem is deterministic across thread counts") {
    const TheoremVerification seq = verify_theorem(4, 8, FlowConfig{}, 100, 1);
    const TheoremVerification par = verify_theorem(4, 8, FlowConfig{}, 100, 4);
    CHECK(seq.converged == par.converged);
    CHECK(seq.stalled == par.stalled);
    CHECK(seq.max_similarity_converged == par.max_similarity_converged);
    CHECK(seq.counterexamples == par.counterexamples);
}

TEST_CASE("verify_theorem rejects n < 3") {
    CHECK_THROWS_AS(verify_theorem(2, 5), InvalidParams);
}
