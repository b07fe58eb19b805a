#pragma once

#include <optional>

#include <json.hpp>

#include "lemniscate/builder.hpp"

namespace lemniscate {

// Insertion-ordered JSON keeps report layout deterministic.
using Json = nlohmann::ordered_json;

Json error_json(const std::string& type, const std::string& message);

/// k deterministic unit directions at angles pi*j/k, j = 0..k-1.
std::vector<Complex> projection_directions(int k);

Json components_json(const ComponentReport& report);

/// checks block: monic residual, projection-cover maximum over 16 directions,
/// capacity estimates of the domain, the strips and the final sublevel set,
/// and the containment violation count of the accepted degree.
Json synthesis_checks(const SynthesisResult& result);

Json construct_report(const Json& config_echo, const SynthesisResult& result,
                      const std::string& roots_path, const Json& timings);

void write_synthesis_svg(const std::filesystem::path& path, const SynthesisResult& result);

struct DemoResult {
    LevelSetRaster raster;
    LabelField field;
    ComponentReport components;
    std::optional<double> polya_max;
    std::string connectivity;  // "resolved" or "indeterminate-at-resolution"
};

/// Rasterize z^n - 1 at the given level over the automatic bounding box and
/// label its components. The exact level 1 raster pinches at z = 0, so its
/// connectivity verdict is flagged indeterminate-at-resolution.
DemoResult run_zn_demo(int n, double level, double cell, int threads, int polya_directions);

Json demo_report(const Json& config_echo, const DemoResult& demo, const Json& timings);

struct VerifyResult {
    LevelSetRaster raster;
    LabelField field;
    ComponentReport components;
    bool has_claim = false;
    ClaimVerdict claim;
};

VerifyResult run_verify(const MonicLemniscatePolynomial& poly, double level, double cell,
                        int threads, int n_required, double min_diameter);

Json verify_report(const Json& config_echo, const VerifyResult& verify, const Json& timings);

void write_raster_svg(const std::filesystem::path& path, const LevelSetRaster& raster,
                      const LabelField& field);

}  // namespace lemniscate
