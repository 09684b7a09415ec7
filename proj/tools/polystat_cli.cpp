// Command-line surface for polygon generation, inspection, perturbation,
// residual evaluation, derivative verification, quotient-descent flow runs
// and batch theorem verification.
//
// Exit codes: 0 success, 1 validation failure, 2 I/O or format error,
// 3 verification failure (a checked property did not hold).

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "polystat/polystat.hpp"

namespace {

using namespace polystat;

constexpr int kExitOk = 0;
constexpr int kExitValidation = 1;
constexpr int kExitIo = 2;
constexpr int kExitVerification = 3;

void emit(const std::string& content, const std::string& out_path) {
    if (out_path.empty())
        std::cout << content;
    else
        write_text_file(out_path, content);
}

std::vector<MoveFamily> parse_families(const std::string& csv) {
    std::vector<MoveFamily> families;
    std::istringstream in(csv);
    std::string token;
    while (std::getline(in, token, ',')) {
        if (token == "slide" || token == "s")
            families.push_back(MoveFamily::Slide);
        else if (token == "tilt" || token == "t")
            families.push_back(MoveFamily::Tilt);
        else if (token == "move-vertex" || token == "move_vertex" || token == "m")
            families.push_back(MoveFamily::MoveVertex);
        else
            throw InvalidParams("unknown family: " + token);
    }
    if (families.empty()) throw InvalidParams("family list is empty");
    return families;
}

// ---- generate ---------------------------------------------------------------

struct GenerateOpts {
    int n = 5;
    double radius = 1.0;
    double a = 1.0, b = 2.0;
    double w = 1.0, h1 = 1.0, h2 = 3.0;
    double eps = 0.05;
    std::uint64_t seed = 0;
    std::string out;
};

int run_generate(const std::string& kind, const GenerateOpts& o) {
    Polygon p = [&] {
        if (kind == "regular") return make_regular(o.n, o.radius);
        if (kind == "rectangle") return make_rectangle(o.a, o.b);
        if (kind == "kite") return make_kite(o.w, o.h1, o.h2);
        if (kind == "random-convex") return make_random_convex(o.n, o.seed);
        return make_perturbed_regular(o.n, o.eps, o.seed);
    }();
    emit(polygon_to_json(p), o.out);
    return kExitOk;
}

// ---- metrics ----------------------------------------------------------------

int run_metrics(const std::string& in_path) {
    const Polygon p = read_polygon_file(in_path);
    const PolygonMetrics m = compute_metrics(p);
    nlohmann::json j;
    j["n"] = p.size();
    j["side_lengths"] = m.side_lengths;
    j["interior_angles"] = m.interior_angles;
    j["perimeter"] = m.perimeter;
    j["area"] = m.area;
    j["quotient"] = m.quotient;
    j["diameter"] = polygon_diameter(p);
    std::cout << j.dump() << "\n";
    return kExitOk;
}

// ---- residuals --------------------------------------------------------------

int run_residuals(const std::string& in_path, double tol, const std::string& format, const std::string& out) {
    const Polygon p = read_polygon_file(in_path);
    const ResidualReport rep = residuals(p, tol);
    if (format == "csv") {
        emit(residual_report_to_csv(rep), out);
        std::cerr << "classification: " << to_string(classify(rep)) << "\n";
    } else {
        emit(residual_report_to_json(rep), out);
    }
    return kExitOk;
}

// ---- check-variations -------------------------------------------------------

int run_check_variations(const std::string& in_path, double h, double tol, bool sabotage_psi) {
    const Polygon p = read_polygon_file(in_path);
    const PolygonMetrics m = compute_metrics(p);
    const double step = h > 0.0 ? h : 1e-6 * polygon_diameter(p);
    const double sign = sabotage_psi ? -1.0 : 1.0;  // test hook: negate psi

    bool all_ok = true;
    std::printf("%-12s %5s %22s %22s %22s %22s %7s\n", "family", "index", "dPer(analytic)", "dPer(fd)",
                "dArea(analytic)", "dArea(fd)", "status");
    for (MoveFamily family : {MoveFamily::Slide, MoveFamily::Tilt, MoveFamily::MoveVertex}) {
        for (std::size_t i = 0; i < p.size(); ++i) {
            FirstVariation analytic = first_variation(m, family, i);
            if (family != MoveFamily::MoveVertex) analytic.d_perimeter *= sign;
            FdDerivative fd{};
            try {
                fd = fd_derivative(p, family, i, step);
            } catch (const Error&) {
                std::printf("%-12s %5zu %-60s\n", to_string(family), i, "skipped: step not admissible");
                continue;
            }
            const bool ok =
                std::abs(analytic.d_perimeter - fd.d_perimeter) <= tol * (1.0 + std::abs(analytic.d_perimeter)) &&
                std::abs(analytic.d_area - fd.d_area) <= tol * (1.0 + std::abs(analytic.d_area));
            all_ok = all_ok && ok;
            std::printf("%-12s %5zu %22s %22s %22s %22s %7s\n", to_string(family), i,
                        format_double(analytic.d_perimeter).c_str(), format_double(fd.d_perimeter).c_str(),
                        format_double(analytic.d_area).c_str(), format_double(fd.d_area).c_str(),
                        ok ? "ok" : "FAIL");
        }
    }
    return all_ok ? kExitOk : kExitVerification;
}

// ---- perturb ----------------------------------------------------------------

int run_perturb(const std::string& in_path, const std::string& family_name, std::size_t index, double t,
                bool has_t, const std::string& endpoint, bool print_range, const std::string& out) {
    const Polygon p = read_polygon_file(in_path);
    const bool rotation = family_name == "rotate-vertex";
    const SideEndpoint pivot = endpoint == "end" ? SideEndpoint::End : SideEndpoint::Start;

    if (print_range) {
        AdmissibleRange r{};
        if (rotation)
            r = rotation_admissible_range(p, index, pivot);
        else
            r = admissible_range(p, parse_families(family_name).front(), index);
        nlohmann::json j{{"lo", r.lo}, {"hi", r.hi}};
        std::cout << j.dump() << "\n";
        if (!has_t) return kExitOk;
    }
    if (!has_t) throw InvalidParams("missing --t");
    const Polygon q = rotation ? rotate_about_vertex(p, index, pivot, t)
                               : apply_move(p, parse_families(family_name).front(), index, t);
    emit(polygon_to_json(q), out);
    return kExitOk;
}

// ---- flow -------------------------------------------------------------------

struct FlowOpts {
    std::string in, families = "slide,tilt", trace_path, svg_dir, out;
    double tol = 1e-9;
    double step0 = 0.1;
    std::size_t max_iters = 100000;
    std::size_t record_every = 1;
    bool require_convergence = false;
};

int run_flow_cmd(const FlowOpts& o) {
    const Polygon p = read_polygon_file(o.in);
    FlowConfig cfg;
    cfg.families = parse_families(o.families);
    cfg.stat_tol = o.tol;
    cfg.step0 = o.step0;
    cfg.max_iters = o.max_iters;
    cfg.record_every = o.record_every;
    cfg.record_polygons = !o.svg_dir.empty();
    const FlowResult result = run_flow(p, cfg);

    if (!o.out.empty()) write_polygon_file(o.out, result.polygon);
    if (!o.trace_path.empty()) write_text_file(o.trace_path, trace_to_jsonl(result.trace));
    if (!o.svg_dir.empty()) {
        std::filesystem::create_directories(o.svg_dir);
        write_svg_frames(o.svg_dir, result.trace);
    }

    nlohmann::json j;
    j["outcome"] = to_string(result.trace.outcome);
    j["iterations"] = result.trace.iterations;
    j["quotient"] = compute_metrics(result.polygon).quotient;
    if (result.trace.classification) j["classification"] = to_string(*result.trace.classification);
    if (o.out.empty()) j["polygon"] = polygon_to_json_value(result.polygon);
    std::cout << j.dump() << "\n";

    if (o.require_convergence && result.trace.outcome != FlowOutcome::Converged) return kExitVerification;
    return kExitOk;
}

// ---- verify-theorem ---------------------------------------------------------

struct VerifyOpts {
    int n = 4;
    std::size_t seeds = 100;
    std::string families = "slide,tilt";
    double tol = 1e-9;
    std::uint64_t seed_base = 0;
    unsigned threads = 1;
    std::string out;
};

int run_verify(const VerifyOpts& o) {
    FlowConfig cfg;
    cfg.families = parse_families(o.families);
    cfg.stat_tol = o.tol;
    const TheoremVerification summary = verify_theorem(o.n, o.seeds, cfg, o.seed_base, o.threads);
    const std::string text = theorem_verification_to_json_value(summary).dump() + "\n";
    std::cout << text;
    if (!o.out.empty()) write_text_file(o.out, text);
    return summary.counterexamples == 0 ? kExitOk : kExitVerification;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"polygon stationarity and isoperimetric flow toolkit"};
    app.require_subcommand(1);
    int exit_code = kExitOk;

    // generate
    auto* generate = app.add_subcommand("generate", "write a polygon JSON file");
    generate->require_subcommand(1);
    GenerateOpts gen;
    std::string gen_kind;
    for (const char* kind : {"regular", "rectangle", "kite", "random-convex", "perturbed-regular"}) {
        auto* sub = generate->add_subcommand(kind);
        if (std::string(kind) == "regular") {
            sub->add_option("--n", gen.n);
            sub->add_option("--radius", gen.radius);
        } else if (std::string(kind) == "rectangle") {
            sub->add_option("--a", gen.a);
            sub->add_option("--b", gen.b);
        } else if (std::string(kind) == "kite") {
            sub->add_option("--w", gen.w);
            sub->add_option("--h1", gen.h1);
            sub->add_option("--h2", gen.h2);
        } else if (std::string(kind) == "random-convex") {
            sub->add_option("--n", gen.n);
            sub->add_option("--seed", gen.seed);
        } else {
            sub->add_option("--n", gen.n);
            sub->add_option("--eps", gen.eps);
            sub->add_option("--seed", gen.seed);
        }
        sub->add_option("--out", gen.out);
        sub->callback([&gen_kind, kind] { gen_kind = kind; });
    }
    generate->callback([&] { exit_code = run_generate(gen_kind, gen); });

    // metrics
    auto* metrics = app.add_subcommand("metrics", "print derived quantities of a polygon");
    std::string metrics_in;
    metrics->add_option("--in", metrics_in)->required();
    metrics->callback([&] { exit_code = run_metrics(metrics_in); });

    // residuals
    auto* res = app.add_subcommand("residuals", "stationarity residuals and classification");
    std::string res_in, res_format = "json", res_out;
    double res_tol = kDefaultStatTol;
    res->add_option("--in", res_in)->required();
    res->add_option("--tol", res_tol);
    res->add_option("--format", res_format)->check(CLI::IsMember({"json", "csv"}));
    res->add_option("--out", res_out);
    res->callback([&] { exit_code = run_residuals(res_in, res_tol, res_format, res_out); });

    // check-variations
    auto* check = app.add_subcommand("check-variations", "analytic vs finite-difference derivatives");
    check->set_help_flag("--help", "print help");  // frees -h/--h for the step option
    std::string check_in;
    double check_h = 0.0, check_tol = 1e-6;
    bool sabotage = false;
    check->add_option("--in", check_in)->required();
    check->add_option("--h", check_h);
    check->add_option("--tol", check_tol);
    check->add_flag("--sabotage-psi", sabotage)->group("");  // forced-failure test hook
    check->callback([&] { exit_code = run_check_variations(check_in, check_h, check_tol, sabotage); });

    // perturb
    auto* perturb = app.add_subcommand("perturb", "apply one move to a polygon");
    std::string pert_in, pert_family, pert_endpoint = "start", pert_out;
    std::size_t pert_index = 0;
    double pert_t = 0.0;
    bool pert_print_range = false;
    perturb->add_option("--in", pert_in)->required();
    perturb->add_option("--family", pert_family)
        ->required()
        ->check(CLI::IsMember({"slide", "tilt", "move-vertex", "rotate-vertex"}));
    perturb->add_option("--index", pert_index)->required();
    auto* t_opt = perturb->add_option("--t", pert_t);
    perturb->add_option("--endpoint", pert_endpoint)->check(CLI::IsMember({"start", "end"}));
    perturb->add_flag("--print-range", pert_print_range);
    perturb->add_option("--out", pert_out);
    perturb->callback([&] {
        exit_code = run_perturb(pert_in, pert_family, pert_index, pert_t, t_opt->count() > 0, pert_endpoint,
                                pert_print_range, pert_out);
    });

    // flow
    auto* flow = app.add_subcommand("flow", "quotient descent toward the regular polygon");
    FlowOpts flow_opts;
    flow->add_option("--in", flow_opts.in)->required();
    flow->add_option("--families", flow_opts.families);
    flow->add_option("--tol", flow_opts.tol);
    flow->add_option("--step0", flow_opts.step0);
    flow->add_option("--max-iters", flow_opts.max_iters);
    flow->add_option("--record-every", flow_opts.record_every);
    flow->add_option("--trace", flow_opts.trace_path);
    flow->add_option("--svg", flow_opts.svg_dir);
    flow->add_option("--out", flow_opts.out);
    flow->add_flag("--require-convergence", flow_opts.require_convergence);
    flow->callback([&] { exit_code = run_flow_cmd(flow_opts); });

    // verify-theorem
    auto* verify = app.add_subcommand("verify-theorem", "batch flow runs hunting counterexamples");
    VerifyOpts verify_opts;
    verify->add_option("--n", verify_opts.n)->required();
    verify->add_option("--seeds", verify_opts.seeds);
    verify->add_option("--families", verify_opts.families);
    verify->add_option("--tol", verify_opts.tol);
    verify->add_option("--seed-base", verify_opts.seed_base);
    verify->add_option("--threads", verify_opts.threads);
    verify->add_option("--out", verify_opts.out);
    verify->callback([&] { exit_code = run_verify(verify_opts); });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitValidation;
    } catch (const FormatError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitIo;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitValidation;
    }
    return exit_code;
}
