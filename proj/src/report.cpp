#include "lemniscate/report.hpp"

#include <cmath>
#include <numbers>

namespace lemniscate {

Json error_json(const std::string& type, const std::string& message) {
    Json j;
    j["error"] = Json{{"type", type}, {"message", message}};
    return j;
}

std::vector<Complex> projection_directions(int k) {
    std::vector<Complex> dirs;
    dirs.reserve(k);
    for (int j = 0; j < k; ++j) {
        const double angle = std::numbers::pi * j / k;
        dirs.emplace_back(std::cos(angle), std::sin(angle));
    }
    return dirs;
}

Json components_json(const ComponentReport& report) {
    Json arr = Json::array();
    for (const Component& c : report.components) {
        Json item;
        item["id"] = c.id;
        item["cells"] = c.cells;
        item["diameter"] = c.diameter;
        item["bbox"] = {c.bbox[0], c.bbox[1], c.bbox[2], c.bbox[3]};
        arr.push_back(std::move(item));
    }
    return arr;
}

namespace {

std::vector<ClosedCurve> contour_curves(const LevelSetRaster& raster) {
    const LabelField field = label_field(raster);
    std::vector<ClosedCurve> curves;
    for (const ComponentContour& comp : component_contours(raster, field))
        for (const auto& loop : comp.loops) curves.push_back({loop});
    return curves;
}

double polya_max_of(const LevelSetRaster& raster, int directions) {
    double best = 0.0;
    for (const Complex& dir : projection_directions(directions))
        best = std::max(best, projected_cover_length(raster, dir));
    return best;
}

}  // namespace

Json synthesis_checks(const SynthesisResult& result) {
    Json checks;
    if (result.converged) {
        checks["monic_residual"] = monic_residual(result.polynomial.roots);
        checks["polya_max"] = polya_max_of(result.raster, 16);
    } else {
        checks["monic_residual"] = nullptr;
        checks["polya_max"] = nullptr;
    }
    const std::vector<ClosedCurve> omega_curve{domain_boundary(result.c, 2048)};
    checks["cap_omega"] = estimate_capacity(omega_curve, 128, 16).value;
    const std::vector<ClosedCurve> strip_curves = result.strips.outlines();
    checks["cap_omega_n"] = estimate_capacity(strip_curves, 128, 16).value;
    if (result.converged) {
        const auto curves = contour_curves(result.raster);
        checks["cap_lemniscate"] =
            curves.empty() ? Json(nullptr) : Json(estimate_capacity(curves, 128, 16).value);
    } else {
        checks["cap_lemniscate"] = nullptr;
    }
    checks["containment_violations"] =
        result.attempts.empty() ? Json(nullptr)
                                : Json(result.attempts.back().containment_violations);
    return checks;
}

Json construct_report(const Json& config_echo, const SynthesisResult& result,
                      const std::string& roots_path, const Json& timings) {
    Json report;
    report["config"] = config_echo;

    Json attempts = Json::array();
    for (std::size_t k = 0; k < result.attempts.size(); ++k) {
        const DegreeAttempt& a = result.attempts[k];
        Json item;
        item["d"] = a.degree;
        item["M"] = a.sup_norm_m;
        item["log_M"] = a.log_sup_norm;
        item["w"] = a.scale_w;
        item["containment_violations"] = a.containment_violations;
        item["n_components"] = a.n_components;
        if (k + 1 == result.attempts.size())
            item["components"] = components_json(result.components_before);
        attempts.push_back(std::move(item));
    }
    report["attempts"] = std::move(attempts);

    if (result.converged) {
        Json poly;
        poly["degree"] = result.polynomial.degree;
        poly["M"] = result.polynomial.sup_norm_m;
        poly["w"] = result.polynomial.scale_w;
        poly["roots_path"] = roots_path;
        report["polynomial"] = std::move(poly);
        report["components"] = components_json(result.components);
    } else {
        report["polynomial"] = nullptr;
        report["components"] = components_json(result.components_before);
    }
    report["checks"] = synthesis_checks(result);
    report["verdict"] = !result.converged ? "NON_CONVERGENCE"
                        : result.claim.pass ? "PASS"
                                            : "FAIL";
    report["timings"] = timings;
    return report;
}

void write_synthesis_svg(const std::filesystem::path& path, const SynthesisResult& result) {
    const bool scaled = result.converged;
    const double w = scaled ? result.polynomial.scale_w : 1.0;
    const LevelSetRaster& raster = scaled ? result.raster : result.raster_before;
    std::vector<SvgOverlay> overlays;
    ClosedCurve omega = domain_boundary(result.c, 512);
    for (Complex& v : omega.vertices) v *= w;
    overlays.push_back({std::move(omega), "#888888"});
    for (const Strip& strip : result.strips.strips) {
        ClosedCurve outline = strip.outline;
        for (Complex& v : outline.vertices) v *= w;
        overlays.push_back({std::move(outline), "#1f77b4"});
    }
    const LabelField field = label_field(raster);
    write_svg(path, {raster.x0, raster.y0, raster.x1, raster.y1},
              component_contours(raster, field), overlays);
}

DemoResult run_zn_demo(int n, double level, double cell, int threads, int polya_directions) {
    if (n < 2) throw ParameterError("zn-demo: need n >= 2");
    if (!(level > 0.0)) throw ParameterError("zn-demo: level must be positive");
    if (!(cell > 0.0)) throw ParameterError("zn-demo: cell must be positive");
    Eigen::ArrayXcd roots(n);
    for (int k = 0; k < n; ++k) {
        const double angle = 2.0 * std::numbers::pi * k / n;
        roots[k] = Complex(std::cos(angle), std::sin(angle));
    }
    DemoResult demo;
    demo.raster = rasterize(roots, level, auto_bbox(roots, level, cell), cell, threads);
    demo.field = label_field(demo.raster);
    demo.components = component_report(demo.raster, demo.field);
    if (polya_directions > 0)
        demo.polya_max = polya_max_of(demo.raster, polya_directions);
    // The level-1 set of z^n - 1 pinches at z = 0; its connectivity cannot be
    // decided at finite grid resolution.
    demo.connectivity = level == 1.0 ? "indeterminate-at-resolution" : "resolved";
    return demo;
}

namespace {

Json raster_json(const LevelSetRaster& raster) {
    Json j;
    j["nx"] = raster.nx;
    j["ny"] = raster.ny;
    j["bbox"] = {raster.x0, raster.y0, raster.x1, raster.y1};
    j["cell"] = raster.cell;
    j["level"] = raster.level;
    j["true_cells"] = raster.true_count();
    return j;
}

}  // namespace

Json demo_report(const Json& config_echo, const DemoResult& demo, const Json& timings) {
    Json report;
    report["config"] = config_echo;
    report["raster"] = raster_json(demo.raster);
    report["n_components"] = demo.components.n_components;
    report["components"] = components_json(demo.components);
    report["connectivity"] = demo.connectivity;
    report["polya_max"] = demo.polya_max ? Json(*demo.polya_max) : Json(nullptr);
    report["timings"] = timings;
    return report;
}

VerifyResult run_verify(const MonicLemniscatePolynomial& poly, double level, double cell,
                        int threads, int n_required, double min_diameter) {
    VerifyResult verify;
    verify.raster = rasterize(poly.roots, level, auto_bbox(poly.roots, level, cell), cell, threads);
    verify.field = label_field(verify.raster);
    verify.components = component_report(verify.raster, verify.field);
    verify.has_claim = n_required > 0;
    if (verify.has_claim)
        verify.claim = check_claim(verify.components, n_required, min_diameter);
    return verify;
}

Json verify_report(const Json& config_echo, const VerifyResult& verify, const Json& timings) {
    Json report;
    report["config"] = config_echo;
    report["raster"] = raster_json(verify.raster);
    report["n_components"] = verify.components.n_components;
    report["components"] = components_json(verify.components);
    if (verify.has_claim) {
        Json claim;
        claim["pass"] = verify.claim.pass;
        claim["top_diameters"] = verify.claim.top_diameters;
        report["claim"] = std::move(claim);
        report["verdict"] = verify.claim.pass ? "PASS" : "FAIL";
    } else {
        report["claim"] = nullptr;
        report["verdict"] = "REPORTED";
    }
    report["timings"] = timings;
    return report;
}

void write_raster_svg(const std::filesystem::path& path, const LevelSetRaster& raster,
                      const LabelField& field) {
    write_svg(path, {raster.x0, raster.y0, raster.x1, raster.y1},
              component_contours(raster, field), {});
}

}  // namespace lemniscate
