#include <chrono>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "lemniscate/report.hpp"

namespace {

using namespace lemniscate;
using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

void emit(const Json& report, const std::string& out_path) {
    if (out_path.empty()) {
        std::cout << report.dump(2) << "\n";
    } else {
        std::ofstream out(out_path);
        if (!out) throw Error("cannot open " + out_path + " for writing");
        out << report.dump(2) << "\n";
    }
}

int fail(const std::string& type, const std::string& message, int code) {
    std::cerr << error_json(type, message).dump() << "\n";
    return code;
}

// Values from --config become the defaults; explicit flags override them.
Json load_config_file(int argc, char** argv) {
    for (int i = 1; i + 1 < argc; ++i) {
        if (std::string(argv[i]) == "--config") {
            std::ifstream in(argv[i + 1]);
            if (!in) throw ParameterError(std::string("cannot open config file ") + argv[i + 1]);
            return Json::parse(in);
        }
    }
    return Json::object();
}

template <typename T>
void from_config(const Json& cfg, const char* key, T& value) {
    if (cfg.contains(key)) value = cfg.at(key).get<T>();
}

struct CommonOptions {
    std::string out, svg, roots, raster, config;
    int threads = 1;
    unsigned long seed = 0;
};

void add_common(CLI::App* cmd, CommonOptions& opt) {
    cmd->add_option("--out", opt.out, "report JSON path (default: stdout)");
    cmd->add_option("--svg", opt.svg, "SVG figure path");
    cmd->add_option("--roots", opt.roots, "polynomial root file path");
    cmd->add_option("--raster", opt.raster, "raster text dump path");
    cmd->add_option("--config", opt.config, "JSON config file; flags override its values");
    cmd->add_option("--threads", opt.threads, "worker count hint (never changes output bits)");
    cmd->add_option("--seed", opt.seed, "seed for test-point generation");
}

int cmd_construct(double c, int n, const SynthesisConfig& synth, const CommonOptions& opt) {
    const auto t0 = Clock::now();
    Json timings;
    SynthesisResult result;
    std::string verdict_note;
    bool converged = true;
    try {
        result = synthesize(c, n, synth);
    } catch (NonConvergenceError& e) {
        result = e.partial();
        converged = false;
        verdict_note = e.what();
    }
    timings["synthesize_s"] = seconds_since(t0);

    const std::string roots_path =
        opt.roots.empty() ? (converged ? "roots.txt" : "") : opt.roots;
    if (converged && !roots_path.empty()) save_polynomial(result.polynomial, roots_path);

    Json config;
    config["command"] = "construct";
    config["c"] = c;
    config["N"] = n;
    config["c_target"] = result.config.c_target;
    config["gap_fraction"] = result.config.gap_fraction;
    config["d_start"] = result.config.d_start;
    config["d_max"] = result.config.d_max;
    config["cell"] = result.config.cell;
    config["epsilon"] = result.config.epsilon;
    config["pool_factor"] = result.config.pool_factor;
    config["refinement"] = result.config.refinement;
    config["seed"] = opt.seed;
    config["out"] = opt.out;
    config["svg"] = opt.svg;
    config["roots"] = roots_path;

    const auto t1 = Clock::now();
    Json report = construct_report(config, result, roots_path, Json::object());
    timings["report_s"] = seconds_since(t1);
    timings["total_s"] = seconds_since(t0);
    report["timings"] = timings;
    emit(report, opt.out);

    if (!opt.svg.empty()) write_synthesis_svg(opt.svg, result);
    if (!opt.raster.empty())
        save_raster_text(converged ? result.raster : result.raster_before, opt.raster);

    if (!converged) {
        std::cerr << error_json("non-convergence", verdict_note).dump() << "\n";
        return 2;
    }
    std::cout << "verdict " << report["verdict"].get<std::string>() << " degree "
              << result.polynomial.degree << " M " << result.polynomial.sup_norm_m << " w "
              << result.polynomial.scale_w << " components "
              << result.components.n_components << "\n";
    return result.claim.pass ? 0 : 2;
}

int cmd_zn_demo(int zn, double level, double cell, int polya_dirs, const CommonOptions& opt) {
    const auto t0 = Clock::now();
    const DemoResult demo = run_zn_demo(zn, level, cell, opt.threads, polya_dirs);
    Json timings;
    timings["total_s"] = seconds_since(t0);

    Json config;
    config["command"] = "zn-demo";
    config["n"] = zn;
    config["level"] = level;
    config["cell"] = cell;
    config["polya_directions"] = polya_dirs;
    config["seed"] = opt.seed;
    config["out"] = opt.out;
    config["svg"] = opt.svg;

    emit(demo_report(config, demo, timings), opt.out);
    if (!opt.svg.empty()) write_raster_svg(opt.svg, demo.raster, demo.field);
    if (!opt.raster.empty()) save_raster_text(demo.raster, opt.raster);

    std::cout << "components " << demo.components.n_components << " (" << demo.connectivity
              << ")\ndiameters";
    for (const Component& c : demo.components.components) std::cout << " " << c.diameter;
    std::cout << "\n";
    return 0;
}

int cmd_verify(const std::string& roots_file, double level, double cell, int n_required,
               double c_min, const CommonOptions& opt) {
    if (roots_file.empty()) throw ParameterError("verify: --roots is required");
    const auto t0 = Clock::now();
    const MonicLemniscatePolynomial poly = load_polynomial(roots_file);
    double use_cell = cell;
    if (use_cell <= 0.0) {
        const auto bbox = auto_bbox(poly.roots, level, 1e-3);
        use_cell = std::max(bbox[2] - bbox[0], bbox[3] - bbox[1]) / 2000.0;
    }
    const VerifyResult verify = run_verify(poly, level, use_cell, opt.threads, n_required, c_min);
    Json timings;
    timings["total_s"] = seconds_since(t0);

    Json config;
    config["command"] = "verify";
    config["roots"] = roots_file;
    config["level"] = level;
    config["cell"] = use_cell;
    config["N"] = n_required;
    config["c_min"] = c_min;
    config["seed"] = opt.seed;
    config["out"] = opt.out;
    config["svg"] = opt.svg;

    emit(verify_report(config, verify, timings), opt.out);
    if (!opt.svg.empty()) write_raster_svg(opt.svg, verify.raster, verify.field);
    if (!opt.raster.empty()) save_raster_text(verify.raster, opt.raster);

    std::cout << "components " << verify.components.n_components << "\n";
    return (verify.has_claim && !verify.claim.pass) ? 2 : 0;
}

struct CapacityArgs {
    std::optional<double> segment;
    std::optional<double> disk;
    std::vector<double> ellipse;
    std::vector<double> lemn;
    std::optional<double> domain_c;
    std::string points_file;
    int n = 128;
    int pool_factor = 16;
};

int cmd_capacity(const CapacityArgs& args, const CommonOptions& opt) {
    Json report;
    report["command"] = "capacity";
    if (args.segment) {
        report["shape"] = Json{{"segment", *args.segment}};
        report["closed_form"] = closed_form_capacity(SegmentShape{*args.segment});
        const std::vector<ClosedCurve> curves{segment_as_curve(0.0, *args.segment)};
        const CapacityEstimate est = estimate_capacity(curves, args.n, args.pool_factor);
        report["estimate"] = Json{{"value", est.value}, {"n", est.n_points},
                                  {"method", "transfinite-diameter"}};
    } else if (args.disk) {
        report["shape"] = Json{{"disk", *args.disk}};
        report["closed_form"] = closed_form_capacity(DiskShape{*args.disk});
        ClosedCurve circle;
        for (int k = 0; k < 1024; ++k) {
            const double a = 2.0 * std::numbers::pi * k / 1024;
            circle.vertices.emplace_back(*args.disk * std::cos(a), *args.disk * std::sin(a));
        }
        const std::vector<ClosedCurve> curves{std::move(circle)};
        const CapacityEstimate est = estimate_capacity(curves, args.n, args.pool_factor);
        report["estimate"] = Json{{"value", est.value}, {"n", est.n_points},
                                  {"method", "transfinite-diameter"}};
    } else if (args.ellipse.size() == 2) {
        report["shape"] = Json{{"ellipse", args.ellipse}};
        report["closed_form"] =
            closed_form_capacity(EllipseShape{args.ellipse[0], args.ellipse[1]});
    } else if (args.lemn.size() == 2) {
        report["shape"] = Json{{"lemniscate", args.lemn}};
        report["closed_form"] = closed_form_capacity(
            LemniscateShape{args.lemn[0], static_cast<int>(args.lemn[1])});
    } else if (args.domain_c) {
        report["shape"] = Json{{"domain", *args.domain_c}};
        report["closed_form"] = domain_capacity(*args.domain_c);
        const std::vector<ClosedCurve> curves{domain_boundary(*args.domain_c, 2048)};
        const CapacityEstimate est = estimate_capacity(curves, args.n, args.pool_factor);
        report["estimate"] = Json{{"value", est.value}, {"n", est.n_points},
                                  {"method", "transfinite-diameter"}};
    } else if (!args.points_file.empty()) {
        std::ifstream in(args.points_file);
        if (!in) throw ParameterError("cannot open points file " + args.points_file);
        const Json doc = Json::parse(in);
        const Json& arr = doc.is_object() && doc.contains("points") ? doc.at("points") : doc;
        if (!arr.is_array() || arr.empty())
            throw ParameterError("points file must hold an array of [re, im] pairs");
        Eigen::ArrayXcd pts(arr.size());
        for (std::size_t i = 0; i < arr.size(); ++i)
            pts[static_cast<Eigen::Index>(i)] =
                Complex(arr[i].at(0).get<double>(), arr[i].at(1).get<double>());
        report["shape"] = Json{{"points", args.points_file}};
        const LejaConfiguration leja = leja_select(pts, std::min<Eigen::Index>(args.n, pts.size()));
        report["estimate"] = Json{{"value", transfinite_diameter(leja.points)},
                                  {"n", leja.points.size()},
                                  {"method", "transfinite-diameter"}};
    } else {
        throw ParameterError(
            "capacity: pass one of --segment, --disk, --ellipse, --lemniscate, --domain, --points");
    }
    emit(report, opt.out);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"polynomial sublevel-set construction and verification"};
    app.require_subcommand(1);

    Json file_cfg;
    try {
        file_cfg = load_config_file(argc, argv);
    } catch (const std::exception& e) {
        return fail("usage", e.what(), 1);
    }

    CommonOptions common;
    from_config(file_cfg, "threads", common.threads);
    from_config(file_cfg, "seed", common.seed);
    from_config(file_cfg, "out", common.out);
    from_config(file_cfg, "svg", common.svg);
    from_config(file_cfg, "roots", common.roots);

    // construct
    double c = 2.5;
    int n = 1;
    SynthesisConfig synth;
    from_config(file_cfg, "c", c);
    from_config(file_cfg, "N", n);
    from_config(file_cfg, "c_target", synth.c_target);
    from_config(file_cfg, "gap_fraction", synth.gap_fraction);
    from_config(file_cfg, "d_start", synth.d_start);
    from_config(file_cfg, "d_max", synth.d_max);
    from_config(file_cfg, "cell", synth.cell);
    from_config(file_cfg, "epsilon", synth.epsilon);
    from_config(file_cfg, "pool_factor", synth.pool_factor);
    from_config(file_cfg, "refinement", synth.refinement);

    CLI::App* construct = app.add_subcommand("construct",
                                             "build and verify a polynomial for (c, N)");
    construct->add_option("--c", c, "component diameter parameter, in (0, 4)");
    construct->add_option("--N", n, "required number of components");
    construct->add_option("--c-target", synth.c_target, "strip diameter target (default 0.96 c)");
    construct->add_option("--gap-fraction", synth.gap_fraction, "vertical budget left empty");
    construct->add_option("--d-start", synth.d_start, "first degree (default 32 N)");
    construct->add_option("--d-max", synth.d_max, "degree cap");
    construct->add_option("--cell", synth.cell, "grid cell (default separation/4)");
    construct->add_option("--epsilon", synth.epsilon, "containment margin (default separation/2)");
    construct->add_option("--pool-factor", synth.pool_factor, "Leja pool size per degree");
    construct->add_option("--refinement", synth.refinement, "sup-norm sample multiplier");
    CommonOptions construct_common = common;
    add_common(construct, construct_common);

    // zn-demo
    int zn = 7;
    double level = 0.99999;
    double demo_cell = 1e-3;
    int polya_dirs = 0;
    from_config(file_cfg, "n", zn);
    from_config(file_cfg, "level", level);
    from_config(file_cfg, "cell", demo_cell);
    CLI::App* demo = app.add_subcommand("zn-demo", "rasterize and label |z^n - 1| <= level");
    demo->add_option("--n", zn, "power n >= 2");
    demo->add_option("--level", level, "sublevel threshold");
    demo->add_option("--cell", demo_cell, "grid cell size");
    demo->add_option("--polya-directions", polya_dirs,
                     "projection-cover directions (0 = skip)");
    CommonOptions demo_common = common;
    add_common(demo, demo_common);

    // verify
    double verify_level = 1.0;
    double verify_cell = -1.0;
    int verify_n = 0;
    double verify_cmin = 0.0;
    CLI::App* verify = app.add_subcommand("verify", "re-check a saved root file at a level");
    verify->add_option("--level", verify_level, "sublevel threshold");
    verify->add_option("--cell", verify_cell, "grid cell (default: bbox/2000)");
    verify->add_option("--N", verify_n, "claim: required component count (0 = report only)");
    verify->add_option("--c-min", verify_cmin, "claim: required component diameter");
    CommonOptions verify_common = common;
    add_common(verify, verify_common);

    // capacity
    CapacityArgs cap;
    CLI::App* capacity = app.add_subcommand("capacity", "closed-form and estimated capacities");
    capacity->add_option("--segment", cap.segment, "segment length");
    capacity->add_option("--disk", cap.disk, "disk radius");
    capacity->add_option("--ellipse", cap.ellipse, "semi-major semi-minor")->expected(2);
    capacity->add_option("--lemniscate", cap.lemn, "leading coefficient and degree")->expected(2);
    capacity->add_option("--domain", cap.domain_c, "capacity of the ellipse domain for c");
    capacity->add_option("--points", cap.points_file, "JSON file with [re, im] pairs");
    capacity->add_option("--n", cap.n, "Leja point count");
    capacity->add_option("--pool-factor", cap.pool_factor, "pool samples per point");
    CommonOptions capacity_common = common;
    add_common(capacity, capacity_common);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (construct->parsed()) {
            synth.threads = construct_common.threads;
            return cmd_construct(c, n, synth, construct_common);
        }
        if (demo->parsed()) return cmd_zn_demo(zn, level, demo_cell, polya_dirs, demo_common);
        if (verify->parsed())
            return cmd_verify(verify_common.roots, verify_level, verify_cell, verify_n,
                              verify_cmin, verify_common);
        if (capacity->parsed()) return cmd_capacity(cap, capacity_common);
        return fail("usage", "no subcommand", 1);
    } catch (const ParameterError& e) {
        return fail("parameter", e.what(), 1);
    } catch (const EvaluationDomainError& e) {
        return fail("domain", e.what(), 1);
    } catch (const DegenerateInputError& e) {
        return fail("degenerate-input", e.what(), 1);
    } catch (const InfeasibleGeometryError& e) {
        return fail("infeasible-geometry", e.what(), 1);
    } catch (const ResolutionError& e) {
        return fail("resolution", e.what(), 1);
    } catch (const NonConvergenceError& e) {
        return fail("non-convergence", e.what(), 2);
    } catch (const std::exception& e) {
        return fail("internal", e.what(), 1);
    }
}
