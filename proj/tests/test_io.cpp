#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <filesystem>

#include "polystat/io.hpp"
#include "support.hpp"

using namespace polystat;
using Catch::Matchers::WithinAbs;

TEST_CASE("polygon JSON round-trips bit exactly") {
    testsupport::Rng rng(24);
    for (int k = 0; k < 50; ++k) {
        const Polygon p = testsupport::random_polygon(rng);
        const Polygon q = polygon_from_json(polygon_to_json(p));
        REQUIRE(p.size() == q.size());
        for (std::size_t i = 0; i < p.size(); ++i) CHECK(p[i] == q[i]);
    }
}

TEST_CASE("polygon JSON reader accepts any finite number formatting") {
    const Polygon p = polygon_from_json(
        R"({"vertices": [[0, 0], [1e0, 0.0], [1.0, 10e-1], [0.0e2, 1]]})");
    CHECK(p.size() == 4);
    CHECK(p[2] == Point{1.0, 1.0});
}

TEST_CASE("polygon JSON reader rejects malformed input") {
    CHECK_THROWS_AS(polygon_from_json("not json"), FormatError);
    CHECK_THROWS_AS(polygon_from_json("{}"), FormatError);
    CHECK_THROWS_AS(polygon_from_json(R"({"vertices": [[1, 2], [3]]})"), FormatError);
    CHECK_THROWS_AS(polygon_from_json(R"({"vertices": [["a", 2], [3, 4], [5, 6]]})"), FormatError);
    // structurally fine but geometrically invalid
    CHECK_THROWS_AS(polygon_from_json(R"({"vertices": [[0, 0], [1, 1], [1, 0], [0, 1]]})"), InvalidPolygon);
}

TEST_CASE("format_double is shortest round-trip") {
    for (double v : {0.1, 1.0 / 3.0, 4.0, -2.5e-7, 123456.789}) {
        const std::string s = format_double(v);
        CHECK(std::stod(s) == v);
    }
    CHECK(format_double(0.5) == "0.5");
    CHECK(format_double(4.0) == "4");
}

TEST_CASE("residual reports round-trip through JSON and CSV") {
    testsupport::Rng rng(25);
    for (int k = 0; k < 20; ++k) {
        const Polygon p = testsupport::random_polygon(rng);
        const ResidualReport rep = residuals(p);

        const ResidualVectors from_json = parse_residual_json(residual_report_to_json(rep));
        const ResidualVectors from_csv = parse_residual_csv(residual_report_to_csv(rep));
        REQUIRE(from_json.slide.size() == rep.slide.size());
        REQUIRE(from_csv.slide.size() == rep.slide.size());
        for (std::size_t i = 0; i < rep.slide.size(); ++i) {
            CHECK_THAT(from_json.slide[i], WithinAbs(rep.slide[i], 1e-15));
            CHECK_THAT(from_json.tilt[i], WithinAbs(rep.tilt[i], 1e-15));
            CHECK_THAT(from_json.move[i], WithinAbs(rep.move[i], 1e-15));
            CHECK_THAT(from_csv.slide[i], WithinAbs(rep.slide[i], 1e-15));
            CHECK_THAT(from_csv.tilt[i], WithinAbs(rep.tilt[i], 1e-15));
            CHECK_THAT(from_csv.move[i], WithinAbs(rep.move[i], 1e-15));
        }
    }
}

TEST_CASE("residual CSV has the documented header") {
    const ResidualReport rep = residuals(make_regular(4, 1.0));
    const std::string csv = residual_report_to_csv(rep);
    CHECK(csv.rfind("i,r_slide,r_tilt,r_move\n", 0) == 0);
    CHECK_THROWS_AS(parse_residual_csv("wrong,header\n1,2,3,4\n"), FormatError);
}

TEST_CASE("flow traces serialize to JSON lines") {
    FlowConfig cfg;
    cfg.record_polygons = true;
    cfg.record_every = 10;
    const FlowResult result = run_flow(make_rectangle(2.0, 1.0), cfg);
    const std::string jsonl = trace_to_jsonl(result.trace);

    std::size_t lines = 0;
    std::istringstream in(jsonl);
    std::string line;
    double prev_q = std::numeric_limits<double>::infinity();
    bool saw_outcome = false;
    while (std::getline(in, line)) {
        ++lines;
        const nlohmann::json j = nlohmann::json::parse(line);
        if (j.contains("outcome")) {
            saw_outcome = true;
            CHECK(j["outcome"] == "converged");
        } else {
            const double q = j["quotient"].get<double>();
            CHECK(q <= prev_q + 1e-12);
            prev_q = q;
            CHECK(j.contains("max_abs_derivative"));
            CHECK(j.contains("polygon"));
        }
    }
    CHECK(saw_outcome);
    CHECK(lines == result.trace.records.size() + 1);
}

TEST_CASE("SVG frames are emitted for recorded snapshots") {
    const std::string svg = polygon_to_svg(make_regular(5, 1.0));
    CHECK(svg.find("<svg ") != std::string::npos);
    CHECK(svg.find("<polygon points=") != std::string::npos);

    FlowConfig cfg;
    cfg.record_polygons = true;
    cfg.record_every = 25;
    const FlowResult result = run_flow(make_rectangle(2.0, 1.0), cfg);
    const std::string dir = "svg_frames_test";
    std::remove((dir + "/frame_000000.svg").c_str());
    std::filesystem::create_directories(dir);
    const auto written = write_svg_frames(dir, result.trace);
    CHECK(written.size() > 0);
    const std::string first = read_text_file(written.front());
    CHECK(first.find("viewBox=\"0 0 1000 1000\"") != std::string::npos);
}

TEST_CASE("file helpers report missing paths as format errors") {
    CHECK_THROWS_AS(read_polygon_file("does_not_exist_xyz.json"), FormatError);
}
