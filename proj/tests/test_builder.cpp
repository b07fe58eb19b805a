#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <numbers>
#include <random>

#include "lemniscate/builder.hpp"

using namespace lemniscate;

namespace {

ClosedCurve circle(double radius, int n = 512, Complex center = {0, 0}) {
    ClosedCurve c;
    for (int k = 0; k < n; ++k) {
        const double a = 2 * std::numbers::pi * k / n;
        c.vertices.emplace_back(center.real() + radius * std::cos(a),
                                center.imag() + radius * std::sin(a));
    }
    return c;
}

// Test harness: treat arbitrary closed curves as a strip family so the Leja
// and sup-norm machinery can run against closed-form oracles.
StripFamily harness(std::vector<ClosedCurve> outlines) {
    StripFamily family;
    family.c = 2.5;
    family.c_target = 1.0;
    family.separation = 1.0;
    family.margin = 0.1;
    for (auto& outline : outlines) {
        Strip strip;
        strip.outline = std::move(outline);
        family.strips.push_back(std::move(strip));
    }
    return family;
}

LejaConfiguration manual_roots(std::initializer_list<Complex> zs, Eigen::Index pool) {
    LejaConfiguration config;
    config.points.resize(static_cast<Eigen::Index>(zs.size()));
    Eigen::Index i = 0;
    for (Complex z : zs) config.points[i++] = z;
    config.candidate_pool_size = pool;
    config.source = "manual";
    return config;
}

}  // namespace

TEST_CASE("build_strips single strip") {
    const StripFamily family = build_strips(2.5, 1, 2.4, 0.5);
    REQUIRE(family.strips.size() == 1);
    const Strip& strip = family.strips[0];
    CHECK(strip.centerline_y == 0.0);
    CHECK(strip.half_length >= 1.2);
    CHECK(set_diameter(strip.outline.vertices) >= 2.4);
    CHECK(family.separation > 0.0);
    CHECK(family.margin > 0.0);
    CHECK(strip.outline.is_simple());
    CHECK(strip.outline.is_counterclockwise());
}

TEST_CASE("build_strips three strips satisfy every family invariant") {
    const double c = 2.5;
    const StripFamily family = build_strips(c, 3, 2.4, 0.5);
    REQUIRE(family.strips.size() == 3);
    for (const Strip& strip : family.strips) {
        CHECK(set_diameter(strip.outline.vertices) >= 2.4);
        for (const Complex& v : strip.outline.vertices)
            CHECK(domain_contains(c, v, family.margin));
        // Symmetric about the vertical line x = c/2.
        for (const Complex& v : strip.outline.vertices) {
            const Complex mirrored(c - v.real(), v.imag());
            double best = 1e9;
            for (const Complex& u : strip.outline.vertices)
                best = std::min(best, std::abs(u - mirrored));
            CHECK(best <= 1e-9);
        }
    }
    for (std::size_t i = 0; i < family.strips.size(); ++i)
        for (std::size_t j = i + 1; j < family.strips.size(); ++j)
            CHECK(curve_separation(family.strips[i].outline, family.strips[j].outline) >=
                  family.separation - 1e-12);
    CHECK(family.separation > 0.0);
}

TEST_CASE("build_strips infeasible targets") {
    CHECK_THROWS_AS(build_strips(2.5, 3, 2.78, 0.5), InfeasibleGeometryError);
    CHECK_THROWS_AS(build_strips(2.5, 1, 2.79, 0.5), InfeasibleGeometryError);
    CHECK_THROWS_AS(build_strips(2.5, 1, 2.4, 0.0), ParameterError);
    CHECK_THROWS_AS(build_strips(2.5, 0, 2.4, 0.5), ParameterError);
    CHECK_THROWS_AS(build_strips(4.5, 1, 2.4, 0.5), ParameterError);
    // Near-degenerate ellipse still packs two strips for a modest target.
    CHECK_NOTHROW(build_strips(3.9, 2, 0.96 * 3.9, 0.5));
}

TEST_CASE("build_strips across a parameter grid") {
    for (double c : {0.5, 1.0, 2.0, 2.5, 3.0, 3.5})
        for (int n : {1, 2, 3, 4}) {
            // 0.96c is feasible only for small strip counts; sweep at 0.9c.
            const double target = n <= 2 ? 0.96 * c : 0.9 * c;
            const StripFamily family = build_strips(c, n, target, 0.5);
            CHECK(family.strips.size() == static_cast<std::size_t>(n));
            for (const Strip& strip : family.strips) {
                CHECK(set_diameter(strip.outline.vertices) >= target);
                for (const Complex& v : strip.outline.vertices)
                    CHECK(domain_contains(c, v, 0.0));
            }
        }
}

TEST_CASE("leja roots live on the strip outlines") {
    const StripFamily family = build_strips(2.5, 2, 2.3, 0.5);
    const auto outlines = family.outlines();
    const LejaConfiguration roots = leja_roots(family, 48, 8);
    REQUIRE(roots.points.size() == 48);
    CHECK(roots.candidate_pool_size == 48 * 8);
    for (Eigen::Index k = 0; k < roots.points.size(); ++k) {
        double best = 1e9;
        for (const auto& outline : outlines)
            best = std::min(best, curve_point_distance(outline, roots.points[k]));
        CHECK(best <= 1e-12);
    }
    CHECK_THROWS_AS(leja_roots(family, 1, 8), ParameterError);
    CHECK_THROWS_AS(leja_roots(family, 48, 4), ParameterError);
}

TEST_CASE("leja roots on a circle reach the disk capacity") {
    const StripFamily disk = harness({circle(1.0)});
    const LejaConfiguration roots = leja_roots(disk, 64, 16);
    const double d64 = transfinite_diameter(roots.points);
    CHECK(d64 >= 1.0);
    CHECK(d64 <= 1.08);
    // d = 1 picks the max-modulus pool point.
    const LejaConfiguration one = leja_roots(disk, 1, 16);
    CHECK(std::abs(one.points[0]) == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("boundary sup norm oracles") {
    // Single root at the center of the unit circle: max |z| = 1.
    const StripFamily unit = harness({circle(1.0, 2048)});
    CHECK(boundary_sup_norm(manual_roots({{0, 0}}, 2048), unit, 10) ==
          doctest::Approx(1.0).epsilon(1e-9));

    // Roots +-1 on a radius-2 circle: max |z^2 - 1| = 5 at z = +-2i.
    const StripFamily radius2 = harness({circle(2.0, 2048)});
    CHECK(boundary_sup_norm(manual_roots({{-1, 0}, {1, 0}}, 2048), radius2, 10) ==
          doctest::Approx(5.0).epsilon(1e-3));

    // Roots of unity on the unit circle: max |z^d - 1| = 2.
    for (int d : {8, 32, 64}) {
        LejaConfiguration roots;
        roots.points.resize(d);
        for (int k = 0; k < d; ++k) {
            const double a = 2 * std::numbers::pi * k / d;
            roots.points[k] = Complex(std::cos(a), std::sin(a));
        }
        roots.candidate_pool_size = 4096;
        CHECK(boundary_sup_norm(roots, unit, 10) == doctest::Approx(2.0).epsilon(1e-3));
    }
    CHECK_THROWS_AS(boundary_sup_norm(manual_roots({{0, 0}}, 64), unit, 3), ParameterError);
}

TEST_CASE("monicize examples") {
    const auto unchanged = monicize(manual_roots({{0.3, 0.1}, {-0.2, 0.4}}, 10), 1.0);
    CHECK(unchanged.scale_w == 1.0);
    CHECK(unchanged.roots[0] == Complex(0.3, 0.1));

    const auto pair = monicize(manual_roots({{-1, 0}, {1, 0}}, 10), 5.0);
    CHECK(pair.scale_w == doctest::Approx(std::pow(5.0, -0.5)).epsilon(1e-15));
    // p(z) = (z - w)(z + w) = z^2 - 1/5.
    for (double x : {0.0, 0.7, -1.3, 2.0}) {
        const Complex p = (Complex(x, 0) - pair.roots[0]) * (Complex(x, 0) - pair.roots[1]);
        CHECK(p.real() == doctest::Approx(x * x - 0.2).epsilon(1e-12));
        CHECK(p.imag() == doctest::Approx(0.0).scale(1.0));
    }

    // Cube roots of unity with M = 8: w = 1/2 and p(z) = z^3 - 1/8.
    LejaConfiguration cube;
    cube.points.resize(3);
    for (int k = 0; k < 3; ++k) {
        const double a = 2 * std::numbers::pi * k / 3;
        cube.points[k] = Complex(std::cos(a), std::sin(a));
    }
    cube.candidate_pool_size = 3;
    const auto scaled = monicize(cube, 8.0);
    CHECK(scaled.scale_w == doctest::Approx(0.5).epsilon(1e-15));
    for (double x : {0.9, -0.4}) {
        Complex p(1, 0);
        for (int k = 0; k < 3; ++k) p *= Complex(x, 0) - scaled.roots[k];
        CHECK(p.real() == doctest::Approx(x * x * x - 0.125).epsilon(1e-12));
    }
    CHECK_THROWS_AS(monicize(cube, 0.0), Error);
}

TEST_CASE("monic residual vanishes at asymptotic evaluation radii") {
    std::mt19937 rng(71);
    std::uniform_real_distribution<double> coord(-2.0, 3.0);
    for (int trial = 0; trial < 50; ++trial) {
        const int d = 2 + trial % 64;
        Eigen::ArrayXcd roots(d);
        for (int k = 0; k < d; ++k) roots[k] = Complex(coord(rng), coord(rng));
        // At z = 1e9 * d * R the first-order term d*R/z is at most 1e-9.
        CHECK(monic_residual(roots, 1e9 * d) <= 1e-6);
    }
}

TEST_CASE("polynomial serialization round trips bit-exactly") {
    std::mt19937 rng(99);
    std::uniform_real_distribution<double> coord(-3.0, 3.0);
    MonicLemniscatePolynomial poly;
    poly.degree = 37;
    poly.roots.resize(37);
    for (int k = 0; k < 37; ++k) poly.roots[k] = Complex(coord(rng), coord(rng) / 7.0);
    poly.sup_norm_m = 0.0123456789012345678;
    poly.scale_w = std::pow(poly.sup_norm_m, -1.0 / 37.0);

    const std::string text = serialize_polynomial(poly);
    const MonicLemniscatePolynomial back = parse_polynomial(text);
    CHECK(back.degree == poly.degree);
    CHECK(back.scale_w == poly.scale_w);
    CHECK(back.sup_norm_m == poly.sup_norm_m);
    for (int k = 0; k < 37; ++k) CHECK(back.roots[k] == poly.roots[k]);
    // Serialize(parse(file)) reproduces the file byte for byte.
    CHECK(serialize_polynomial(back) == text);

    const auto path = std::filesystem::temp_directory_path() / "lemniscate_poly_test.txt";
    save_polynomial(poly, path);
    const auto loaded = load_polynomial(path);
    for (int k = 0; k < 37; ++k) CHECK(loaded.roots[k] == poly.roots[k]);
    std::filesystem::remove(path);
    CHECK_THROWS_AS(parse_polynomial("not a root file"), ParameterError);
}

TEST_CASE("joint selection separates well-exposed components") {
    // Positive control for component separation: two small circles far apart
    // decouple at modest degree, unlike deeply slitted stacked strips.
    const StripFamily dumbbell =
        harness({circle(0.3, 512, {-2, 0}), circle(0.3, 512, {2, 0})});
    const LejaConfiguration roots = leja_roots(dumbbell, 64, 16);
    const double log_m = boundary_sup_norm_log(roots, dumbbell, 10);
    const auto bbox = auto_bbox_log(roots.points, log_m, 0.02);
    const auto raster = rasterize_grid_log(
        roots.points, log_m, bbox[0], bbox[1],
        static_cast<Eigen::Index>(std::ceil((bbox[2] - bbox[0]) / 0.02)),
        static_cast<Eigen::Index>(std::ceil((bbox[3] - bbox[1]) / 0.02)), 0.02);
    const auto report = label_components(raster);
    CHECK(report.n_components == 2);
}

TEST_CASE("synthesize a single component end to end") {
    const SynthesisResult result = synthesize(2.5, 1);
    CHECK(result.converged);
    CHECK(result.polynomial.sup_norm_m <= 1.0);
    CHECK(result.polynomial.scale_w >= 1.0);
    CHECK(result.claim.pass);
    CHECK(result.components.n_components >= 1);
    CHECK(result.components.components[0].diameter >= 2.3);
    CHECK(result.attempts.back().containment_violations == 0);

    // All roots of p lie on w * (strip outlines).
    const double w = result.polynomial.scale_w;
    const auto outlines = result.strips.outlines();
    for (Eigen::Index k = 0; k < result.polynomial.roots.size(); ++k) {
        const Complex unscaled = result.polynomial.roots[k] / w;
        double best = 1e9;
        for (const auto& outline : outlines)
            best = std::min(best, curve_point_distance(outline, unscaled));
        CHECK(best <= 1e-9);
    }

    // Monic by representation: the scaled product expands with leading
    // coefficient one, checked far outside the root set.
    const double radius = std::sqrt(result.polynomial.roots.abs2().maxCoeff());
    CHECK(monic_residual(result.polynomial.roots, 1e9 * result.polynomial.degree) <= 1e-6);
    CHECK(radius > 0.0);
}

TEST_CASE("scaling law: component diameters scale by w") {
    const SynthesisResult result = synthesize(2.5, 1);
    REQUIRE(result.converged);
    const double w = result.polynomial.scale_w;
    REQUIRE(result.components.n_components == result.components_before.n_components);
    const double cell_after = result.raster.cell;
    for (std::size_t k = 0; k < result.components.components.size(); ++k) {
        const double before = result.components_before.components[k].diameter;
        const double after = result.components.components[k].diameter;
        CHECK(std::abs(after - w * before) <= 2.0 * cell_after);
    }
    CHECK(result.raster.cell == doctest::Approx(w * result.raster_before.cell).epsilon(1e-12));
}

TEST_CASE("capacity chain at convergence") {
    const SynthesisResult result = synthesize(2.5, 1);
    REQUIRE(result.converged);
    const double m = result.polynomial.sup_norm_m;
    const int d = result.polynomial.degree;
    const double chain = closed_form_capacity(LemniscateShape{1.0 / m, d});
    CHECK(chain == doctest::Approx(std::pow(m, 1.0 / d)).epsilon(1e-12));
    CHECK(chain <= 1.0 + 1e-9);

    // Strip-union capacity stays below the domain's capacity 1.
    const double cap_strips = estimate_capacity(result.strips.outlines(), 128, 16).value;
    CHECK(cap_strips <= 1.05);

    // The normalized sublevel set has capacity M^(1/d); its rasterized
    // boundary agrees within 10 percent.
    const LabelField field = label_field(result.raster_before);
    std::vector<ClosedCurve> curves;
    for (const auto& comp : component_contours(result.raster_before, field))
        for (const auto& loop : comp.loops) curves.push_back({loop});
    REQUIRE_FALSE(curves.empty());
    const double est = estimate_capacity(curves, 128, 16).value;
    CHECK(est == doctest::Approx(chain).epsilon(0.10));
}

TEST_CASE("degree schedule exhaustion reports a diagnostic") {
    try {
        synthesize(3.9, 2, {.d_max = 64});
        FAIL("expected NonConvergenceError");
    } catch (const NonConvergenceError& e) {
        const SynthesisResult& partial = e.partial();
        CHECK_FALSE(partial.converged);
        REQUIRE(partial.attempts.size() == 1);  // d_start = 64 = d_max
        CHECK(partial.attempts[0].degree == 64);
        CHECK(partial.components_before.n_components >= 1);
    }
}

TEST_CASE("synthesize validates parameters") {
    CHECK_THROWS_AS(synthesize(5.0, 1), ParameterError);
    CHECK_THROWS_AS(synthesize(2.5, 0), ParameterError);
    CHECK_THROWS_AS(synthesize(2.5, 1, {.d_start = 128, .d_max = 64}), ParameterError);
    CHECK_THROWS_AS(synthesize(2.5, 1, {.pool_factor = 2}), ParameterError);
}
