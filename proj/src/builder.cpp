#include "lemniscate/builder.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <sstream>

namespace lemniscate {

namespace {

ClosedCurve rounded_rectangle(double cx, double cy, double half_len, double half_h,
                              double corner_r, int arc_segments) {
    corner_r = std::min(corner_r, 0.95 * std::min(half_len, half_h));
    ClosedCurve curve;
    curve.vertices.reserve(4 * (arc_segments + 1));
    auto arc = [&](double ax, double ay, double a0, double a1) {
        for (int s = 0; s <= arc_segments; ++s) {
            const double t = a0 + (a1 - a0) * s / arc_segments;
            const Complex v(ax + corner_r * std::cos(t), ay + corner_r * std::sin(t));
            if (curve.vertices.empty() || std::abs(v - curve.vertices.back()) > 1e-15)
                curve.vertices.push_back(v);
        }
    };
    const double pi = std::numbers::pi;
    arc(cx + half_len - corner_r, cy - half_h + corner_r, -pi / 2, 0.0);
    arc(cx + half_len - corner_r, cy + half_h - corner_r, 0.0, pi / 2);
    arc(cx - half_len + corner_r, cy + half_h - corner_r, pi / 2, pi);
    arc(cx - half_len + corner_r, cy - half_h + corner_r, pi, 3 * pi / 2);
    if (std::abs(curve.vertices.back() - curve.vertices.front()) <= 1e-15)
        curve.vertices.pop_back();
    return curve;
}

// Largest margin m such that every vertex stays inside the ellipse shrunk by
// m on both semi-axes.
double family_margin(const std::vector<Strip>& strips, double c, double semi_minor) {
    auto fits = [&](double m) {
        for (const Strip& s : strips)
            for (const Complex& v : s.outline.vertices)
                if (!domain_contains(c, v, m)) return false;
        return true;
    };
    if (!fits(0.0)) return -1.0;
    double lo = 0.0, hi = semi_minor * (1.0 - 1e-12);
    if (fits(hi)) return hi;
    for (int iter = 0; iter < 60; ++iter) {
        const double mid = 0.5 * (lo + hi);
        (fits(mid) ? lo : hi) = mid;
    }
    return lo;
}

}  // namespace

std::vector<ClosedCurve> StripFamily::outlines() const {
    std::vector<ClosedCurve> out;
    out.reserve(strips.size());
    for (const Strip& s : strips) out.push_back(s.outline);
    return out;
}

StripFamily build_strips(double c, int n_strips, double c_target, double gap_fraction) {
    const EllipseDomain dom = make_domain(c);
    if (n_strips < 1) throw ParameterError("build_strips: need at least one strip");
    if (!(c_target > 0.0)) throw ParameterError("build_strips: c_target must be positive");
    if (!(gap_fraction > 0.0 && gap_fraction < 1.0))
        throw ParameterError("build_strips: gap_fraction must lie in (0, 1)");

    const double a = dom.semi_major();
    const double b = dom.semi_minor();
    const double two_a = 2.0 * a;
    if (c_target >= two_a)
        throw InfeasibleGeometryError(
            "build_strips: c_target >= 2a, exceeds the widest chord of the domain");

    // Largest |y| at which the horizontal chord still reaches c_target.
    const double ratio = c_target / two_a;
    const double y_max = b * std::sqrt(1.0 - ratio * ratio);
    if (!(y_max > 0.0))
        throw InfeasibleGeometryError("build_strips: no vertical room for strips (y_max <= 0)");

    // Strip bands packed inside |y| <= 0.9 * y_max; each band of height H
    // gives gap_fraction * H to the gap and the rest to the strip.
    const double spread = 0.9 * y_max;
    const double band = 2.0 * spread / n_strips;
    const double half_height = 0.5 * (1.0 - gap_fraction) * band;
    if (half_height < 1e-4)
        throw InfeasibleGeometryError("build_strips: per-strip height below 1e-4");

    StripFamily family;
    family.c = c;
    family.c_target = c_target;
    family.strips.reserve(n_strips);
    for (int k = 0; k < n_strips; ++k) {
        Strip strip;
        strip.centerline_y = n_strips == 1 ? 0.0 : -spread + (k + 0.5) * band;
        strip.half_height = half_height;
        const double y_edge = std::abs(strip.centerline_y) + half_height;
        const double t = y_edge / b;
        const double chord = two_a * std::sqrt(std::max(0.0, 1.0 - t * t));
        strip.half_length = 0.98 * chord / 2.0;
        if (2.0 * strip.half_length < c_target)
            throw InfeasibleGeometryError(
                "build_strips: achievable strip diameter falls below c_target");
        strip.outline = rounded_rectangle(dom.center_x(), strip.centerline_y,
                                          strip.half_length, strip.half_height,
                                          half_height / 2.0, 8);
        family.strips.push_back(std::move(strip));
    }

    const double margin = family_margin(family.strips, c, b);
    if (!(margin > 0.0))
        throw InfeasibleGeometryError("build_strips: strip outline reaches the domain boundary");
    family.margin = margin;

    if (n_strips >= 2) {
        double sep = std::numeric_limits<double>::infinity();
        for (int i = 0; i < n_strips; ++i)
            for (int j = i + 1; j < n_strips; ++j)
                sep = std::min(sep, curve_separation(family.strips[i].outline,
                                                     family.strips[j].outline));
        family.separation = sep;
    } else {
        family.separation =
            curve_separation(family.strips[0].outline, domain_boundary(c, 1024));
    }
    if (!(family.separation > 0.0))
        throw InfeasibleGeometryError("build_strips: strips are not separated");
    return family;
}

LejaConfiguration leja_roots(const StripFamily& strips, int degree, int pool_factor) {
    if (degree < static_cast<int>(strips.strips.size()))
        throw ParameterError("leja_roots: degree must be at least the strip count");
    if (pool_factor < 8) throw ParameterError("leja_roots: pool_factor must be >= 8");
    const auto outlines = strips.outlines();
    const Eigen::ArrayXcd pool =
        sample_boundary(outlines, static_cast<Eigen::Index>(pool_factor) * degree);
    char tag[96];
    std::snprintf(tag, sizeof tag, "strips(c=%.6g,n=%zu)", strips.c, strips.strips.size());
    return leja_select(pool, degree, tag);
}

double boundary_sup_norm_log(const LejaConfiguration& roots, const StripFamily& strips,
                             int refinement) {
    if (refinement < 4) throw ParameterError("boundary_sup_norm: refinement must be >= 4");
    const auto outlines = strips.outlines();
    const Eigen::Index count =
        static_cast<Eigen::Index>(refinement) * std::max<Eigen::Index>(roots.candidate_pool_size,
                                                                       roots.points.size());
    const Eigen::ArrayXcd samples = sample_boundary(outlines, count);
    Eigen::ArrayXd acc = Eigen::ArrayXd::Zero(samples.size());
    for (Eigen::Index k = 0; k < roots.points.size(); ++k)
        acc += 0.5 * (samples - roots.points[k]).abs2().log();
    return acc.maxCoeff();
}

double boundary_sup_norm(const LejaConfiguration& roots, const StripFamily& strips,
                         int refinement) {
    return std::exp(boundary_sup_norm_log(roots, strips, refinement));
}

MonicLemniscatePolynomial monicize(const LejaConfiguration& roots, double sup_norm) {
    if (!(sup_norm > 0.0)) throw Error("monicize: sup norm must be positive");
    if (roots.points.size() < 1) throw ParameterError("monicize: need at least one root");
    MonicLemniscatePolynomial poly;
    poly.degree = static_cast<int>(roots.points.size());
    poly.sup_norm_m = sup_norm;
    poly.scale_w = std::pow(sup_norm, -1.0 / poly.degree);
    poly.roots = poly.scale_w * roots.points;
    poly.provenance = roots.source;
    return poly;
}

SynthesisResult synthesize(double c, int n_components, SynthesisConfig config) {
    make_domain(c);
    if (n_components < 1) throw ParameterError("synthesize: need at least one component");
    if (config.c_target <= 0.0) config.c_target = 0.96 * c;
    if (config.d_start <= 0) config.d_start = 32 * n_components;
    if (config.d_max < config.d_start)
        throw ParameterError("synthesize: d_max is below the start of the degree schedule");
    if (config.pool_factor < 8) throw ParameterError("synthesize: pool_factor must be >= 8");
    if (config.refinement < 4) throw ParameterError("synthesize: refinement must be >= 4");
    if (config.threads < 1) config.threads = 1;

    SynthesisResult result;
    result.c = c;
    result.n_required = n_components;
    result.strips = build_strips(c, n_components, config.c_target, config.gap_fraction);
    if (config.epsilon <= 0.0) config.epsilon = result.strips.separation / 2.0;
    if (config.cell <= 0.0) config.cell = result.strips.separation / 4.0;
    result.config = config;

    const auto outlines = result.strips.outlines();
    for (int d = config.d_start;;) {
        const LejaConfiguration roots = leja_roots(result.strips, d, config.pool_factor);
        const double log_m = boundary_sup_norm_log(roots, result.strips, config.refinement);
        const double sup_m = std::exp(log_m);

        const auto bbox = auto_bbox_log(roots.points, log_m, config.cell);
        const auto nx = std::max<Eigen::Index>(
            1, static_cast<Eigen::Index>(std::ceil((bbox[2] - bbox[0]) / config.cell - 1e-12)));
        const auto ny = std::max<Eigen::Index>(
            1, static_cast<Eigen::Index>(std::ceil((bbox[3] - bbox[1]) / config.cell - 1e-12)));
        LevelSetRaster raster_q = rasterize_grid_log(roots.points, log_m, bbox[0], bbox[1],
                                                     nx, ny, config.cell, config.threads);
        const long long violations =
            containment_violations(raster_q, outlines, config.epsilon, c);
        ComponentReport report_q = label_components(raster_q);

        DegreeAttempt attempt;
        attempt.degree = d;
        attempt.sup_norm_m = sup_m;
        attempt.log_sup_norm = log_m;
        attempt.scale_w = sup_m > 0.0 ? std::pow(sup_m, -1.0 / d) : std::exp(-log_m / d);
        attempt.containment_violations = violations;
        attempt.n_components = report_q.n_components;
        result.attempts.push_back(attempt);

        const bool accepted = violations == 0 && log_m <= 0.0 && sup_m > 0.0 &&
                              report_q.n_components >= n_components;
        if (accepted) {
            result.polynomial = monicize(roots, sup_m);
            const double w = result.polynomial.scale_w;
            // Same grid scaled by w: p(w z) = w^d q(z), so the mask is the
            // level-1 set of p re-evaluated on the stretched lattice.
            result.raster = rasterize_grid_log(result.polynomial.roots, 0.0,
                                               w * raster_q.x0, w * raster_q.y0,
                                               raster_q.nx, raster_q.ny,
                                               w * config.cell, config.threads);
            result.components = label_components(result.raster);
            result.claim = check_claim(result.components, n_components, config.c_target);
            result.raster_before = std::move(raster_q);
            result.components_before = std::move(report_q);
            result.converged = true;
            return result;
        }

        result.raster_before = std::move(raster_q);
        result.components_before = std::move(report_q);
        if (d >= config.d_max) {
            char msg[128];
            std::snprintf(msg, sizeof msg,
                          "synthesize: degree schedule exhausted at d = %d without convergence", d);
            result.converged = false;
            throw NonConvergenceError(msg, std::move(result));
        }
        d = std::min(2 * d, config.d_max);
    }
}

std::string serialize_polynomial(const MonicLemniscatePolynomial& poly) {
    std::string out;
    char line[96];
    out += "lemniscate polynomial v1\n";
    std::snprintf(line, sizeof line, "degree %d\n", poly.degree);
    out += line;
    std::snprintf(line, sizeof line, "w %.16e\n", poly.scale_w);
    out += line;
    std::snprintf(line, sizeof line, "M %.16e\n", poly.sup_norm_m);
    out += line;
    out += "roots\n";
    for (Eigen::Index k = 0; k < poly.roots.size(); ++k) {
        std::snprintf(line, sizeof line, "%.16e %.16e\n", poly.roots[k].real(),
                      poly.roots[k].imag());
        out += line;
    }
    return out;
}

MonicLemniscatePolynomial parse_polynomial(const std::string& text) {
    std::istringstream in(text);
    std::string word;
    auto expect = [&](const char* token) {
        if (!(in >> word) || word != token)
            throw ParameterError(std::string("malformed polynomial file near '") + token + "'");
    };
    expect("lemniscate");
    expect("polynomial");
    expect("v1");
    MonicLemniscatePolynomial poly;
    expect("degree");
    if (!(in >> poly.degree) || poly.degree < 1)
        throw ParameterError("malformed polynomial file: bad degree");
    expect("w");
    if (!(in >> poly.scale_w)) throw ParameterError("malformed polynomial file: bad w");
    expect("M");
    if (!(in >> poly.sup_norm_m)) throw ParameterError("malformed polynomial file: bad M");
    expect("roots");
    poly.roots.resize(poly.degree);
    for (int k = 0; k < poly.degree; ++k) {
        double re = 0, im = 0;
        if (!(in >> re >> im)) throw ParameterError("malformed polynomial file: short root list");
        poly.roots[k] = Complex(re, im);
    }
    return poly;
}

void save_polynomial(const MonicLemniscatePolynomial& poly, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw Error("cannot open " + path.string() + " for writing");
    out << serialize_polynomial(poly);
}

MonicLemniscatePolynomial load_polynomial(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open " + path.string());
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_polynomial(buffer.str());
}

double monic_residual(const Eigen::ArrayXcd& roots, double radius_factor) {
    if (roots.size() == 0) throw ParameterError("monic_residual: no roots");
    const double radius = std::sqrt(roots.abs2().maxCoeff());
    const Complex z(radius_factor * std::max(radius, 1e-300), 0.0);
    Complex product(1.0, 0.0);
    for (Eigen::Index k = 0; k < roots.size(); ++k)
        product *= Complex(1.0, 0.0) - roots[k] / z;
    return std::abs(product - Complex(1.0, 0.0));
}

}  // namespace lemniscate
