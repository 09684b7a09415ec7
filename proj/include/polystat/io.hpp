#pragma once

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "polystat/flow.hpp"
#include "polystat/geometry.hpp"
#include "polystat/variations.hpp"

namespace polystat {

// Shortest decimal form that round-trips to the same double.
inline std::string format_double(double v) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

inline std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw FormatError("cannot open file: " + path);
    std::ostringstream out;
    out << in.rdbuf();
    return out.str();
}

inline void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw FormatError("cannot write file: " + path);
    out << content;
    if (!out) throw FormatError("write failed: " + path);
}

// --- Polygon JSON: {"vertices": [[x, y], ...]} -----------------------------

inline nlohmann::json polygon_to_json_value(const Polygon& poly) {
    nlohmann::json verts = nlohmann::json::array();
    for (const Point& p : poly.vertices()) verts.push_back({p.x, p.y});
    return nlohmann::json{{"vertices", std::move(verts)}};
}

inline std::string polygon_to_json(const Polygon& poly) { return polygon_to_json_value(poly).dump() + "\n"; }

inline Polygon polygon_from_json_value(const nlohmann::json& j) {
    if (!j.is_object() || !j.contains("vertices") || !j["vertices"].is_array())
        throw FormatError("polygon JSON must be an object with a \"vertices\" array");
    std::vector<Point> pts;
    pts.reserve(j["vertices"].size());
    for (const auto& entry : j["vertices"]) {
        if (!entry.is_array() || entry.size() != 2 || !entry[0].is_number() || !entry[1].is_number())
            throw FormatError("each vertex must be a [x, y] number pair");
        pts.push_back({entry[0].get<double>(), entry[1].get<double>()});
    }
    return Polygon::from_vertices(std::move(pts));
}

inline Polygon polygon_from_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw FormatError(std::string("invalid JSON: ") + e.what());
    }
    return polygon_from_json_value(j);
}

inline Polygon read_polygon_file(const std::string& path) { return polygon_from_json(read_text_file(path)); }

inline void write_polygon_file(const std::string& path, const Polygon& poly) {
    write_text_file(path, polygon_to_json(poly));
}

// --- Residual reports -------------------------------------------------------

inline nlohmann::json residual_report_to_json_value(const ResidualReport& rep) {
    nlohmann::json j;
    j["slide"] = rep.slide;
    j["tilt"] = rep.tilt;
    j["move"] = rep.move;
    j["max_abs"] = {{"slide", rep.max_abs_slide}, {"tilt", rep.max_abs_tilt}, {"move", rep.max_abs_move}};
    j["stat_tol"] = rep.stat_tol;
    j["flags"] = {{"slide_stationary", rep.slide_stationary}, {"tilt_stationary", rep.tilt_stationary},
                  {"move_stationary", rep.move_stationary},   {"equiangular", rep.equiangular},
                  {"equilateral", rep.equilateral},           {"regular", rep.regular}};
    j["classification"] = to_string(classify(rep));
    return j;
}

inline std::string residual_report_to_json(const ResidualReport& rep) {
    return residual_report_to_json_value(rep).dump() + "\n";
}

inline std::string residual_report_to_csv(const ResidualReport& rep) {
    std::string out = "i,r_slide,r_tilt,r_move\n";
    for (std::size_t i = 0; i < rep.slide.size(); ++i) {
        out += std::to_string(i);
        out += ',';
        out += format_double(rep.slide[i]);
        out += ',';
        out += format_double(rep.tilt[i]);
        out += ',';
        out += format_double(rep.move[i]);
        out += '\n';
    }
    return out;
}

// Residual vectors recovered from serialized reports (round-trip checks).
struct ResidualVectors {
    std::vector<double> slide;
    std::vector<double> tilt;
    std::vector<double> move;
};

inline ResidualVectors parse_residual_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw FormatError(std::string("invalid JSON: ") + e.what());
    }
    if (!j.contains("slide") || !j.contains("tilt") || !j.contains("move"))
        throw FormatError("residual JSON must contain slide/tilt/move arrays");
    ResidualVectors out;
    out.slide = j["slide"].get<std::vector<double>>();
    out.tilt = j["tilt"].get<std::vector<double>>();
    out.move = j["move"].get<std::vector<double>>();
    return out;
}

inline ResidualVectors parse_residual_csv(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line) || line != "i,r_slide,r_tilt,r_move")
        throw FormatError("missing residual CSV header");
    ResidualVectors out;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream row(line);
        std::string cell;
        std::vector<double> values;
        while (std::getline(row, cell, ',')) {
            double v = 0.0;
            const auto res = std::from_chars(cell.data(), cell.data() + cell.size(), v);
            if (res.ec != std::errc{}) throw FormatError("bad number in residual CSV: " + cell);
            values.push_back(v);
        }
        if (values.size() != 4) throw FormatError("residual CSV rows need 4 columns");
        out.slide.push_back(values[1]);
        out.tilt.push_back(values[2]);
        out.move.push_back(values[3]);
    }
    return out;
}

// --- Flow traces: JSON lines, one record per stride -------------------------

inline std::string trace_to_jsonl(const FlowTrace& trace) {
    std::string out;
    for (const TraceRecord& rec : trace.records) {
        nlohmann::json j;
        j["iteration"] = rec.iteration;
        j["quotient"] = rec.quotient;
        j["max_abs_derivative"] = {{"slide", rec.max_abs_derivative[0]},
                                   {"tilt", rec.max_abs_derivative[1]},
                                   {"move_vertex", rec.max_abs_derivative[2]}};
        if (rec.polygon) j["polygon"] = polygon_to_json_value(*rec.polygon)["vertices"];
        out += j.dump();
        out += '\n';
    }
    nlohmann::json tail;
    tail["outcome"] = to_string(trace.outcome);
    tail["iterations"] = trace.iterations;
    if (trace.classification) tail["classification"] = to_string(*trace.classification);
    out += tail.dump();
    out += '\n';
    return out;
}

// --- SVG frames (presentational only) ---------------------------------------

inline std::string polygon_to_svg(const Polygon& poly) {
    double min_x = poly[0].x, max_x = min_x, min_y = poly[0].y, max_y = min_y;
    for (const Point& p : poly.vertices()) {
        min_x = std::min(min_x, p.x);
        max_x = std::max(max_x, p.x);
        min_y = std::min(min_y, p.y);
        max_y = std::max(max_y, p.y);
    }
    // uniform scale into a 1000x1000 viewbox with a 5% margin
    const double span = std::max(max_x - min_x, max_y - min_y);
    const double scale = 900.0 / span;
    const double off_x = 50.0 + 0.5 * (900.0 - (max_x - min_x) * scale);
    const double off_y = 50.0 + 0.5 * (900.0 - (max_y - min_y) * scale);
    std::string points;
    char buf[64];
    for (const Point& p : poly.vertices()) {
        const double sx = off_x + (p.x - min_x) * scale;
        const double sy = 1000.0 - (off_y + (p.y - min_y) * scale);
        std::snprintf(buf, sizeof(buf), "%.3f,%.3f ", sx, sy);
        points += buf;
    }
    if (!points.empty()) points.pop_back();
    return "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 1000 1000\">\n"
           "  <polygon points=\"" +
           points + "\" fill=\"#f2a33c\" fill-opacity=\"0.35\" stroke=\"#333333\" stroke-width=\"3\"/>\n</svg>\n";
}

// One SVG file per recorded iterate that carries a polygon snapshot.
// Returns the written paths.
inline std::vector<std::string> write_svg_frames(const std::string& directory, const FlowTrace& trace) {
    std::vector<std::string> written;
    std::size_t frame = 0;
    for (const TraceRecord& rec : trace.records) {
        if (!rec.polygon) continue;
        char name[32];
        std::snprintf(name, sizeof(name), "frame_%06zu.svg", frame++);
        const std::string path = directory + "/" + name;
        write_text_file(path, polygon_to_svg(*rec.polygon));
        written.push_back(path);
    }
    return written;
}

// --- Theorem verification summaries -----------------------------------------

inline nlohmann::json theorem_verification_to_json_value(const TheoremVerification& s) {
    nlohmann::json j;
    j["n"] = s.n;
    j["seeds"] = s.seeds;
    j["converged"] = s.converged;
    j["stalled"] = s.stalled;
    j["hit_max_iters"] = s.hit_max_iters;
    j["convergence_fraction"] = s.convergence_fraction;
    j["max_similarity_converged"] = s.max_similarity_converged;
    j["counterexamples"] = s.counterexamples;
    if (s.counterexample) j["counterexample"] = polygon_to_json_value(*s.counterexample);
    return j;
}

}  // namespace polystat
