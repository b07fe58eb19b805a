#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "lemniscate/geometry.hpp"

namespace lemniscate {

inline constexpr long long kMaxRasterCells = 1LL << 28;

/// Bit-packed boolean grid of log|p(z)| <= log(level) over a bounding box.
/// Rows are padded to whole 64-bit words so they never share storage.
struct LevelSetRaster {
    double x0 = 0, y0 = 0, x1 = 0, y1 = 0;
    Eigen::Index nx = 0, ny = 0;
    double cell = 0.0;
    double level = 1.0;
    Eigen::Index words_per_row = 0;
    std::vector<std::uint64_t> bits;

    bool get(Eigen::Index i, Eigen::Index j) const {
        return (bits[static_cast<std::size_t>(j) * words_per_row + (i >> 6)] >>
                (i & 63)) & 1u;
    }
    void set(Eigen::Index i, Eigen::Index j) {
        bits[static_cast<std::size_t>(j) * words_per_row + (i >> 6)] |=
            std::uint64_t{1} << (i & 63);
    }
    Complex cell_center(Eigen::Index i, Eigen::Index j) const {
        return {x0 + (static_cast<double>(i) + 0.5) * cell,
                y0 + (static_cast<double>(j) + 0.5) * cell};
    }
    long long true_count() const;
};

/// Sum of log|z - r_k|; -inf when z coincides with a root.
double log_abs_eval(const Eigen::ArrayXcd& roots, Complex z);

/// Root bounding box inflated by level^(1/d) + 2 cells. Every point of
/// {|p| <= level} is within level^(1/d) of some root, so the box covers the
/// sublevel set with a guaranteed all-false border ring.
std::array<double, 4> auto_bbox(const Eigen::ArrayXcd& roots, double level, double cell);
std::array<double, 4> auto_bbox_log(const Eigen::ArrayXcd& roots, double log_level, double cell);

LevelSetRaster rasterize(const Eigen::ArrayXcd& roots, double level,
                         const std::array<double, 4>& bbox, double cell, int threads = 1);

/// Grid-explicit variant; log_level = log(level) is taken directly so callers
/// can pass levels far below double range.
LevelSetRaster rasterize_grid_log(const Eigen::ArrayXcd& roots, double log_level,
                                  double x0, double y0, Eigen::Index nx, Eigen::Index ny,
                                  double cell, int threads = 1);

struct Component {
    int id = 0;
    long long cells = 0;
    double diameter = 0.0;
    std::array<double, 4> bbox{};  // world coordinates of the covered cells
};

struct ComponentReport {
    std::vector<Component> components;  // sorted by diameter, descending
    int n_components = 0;
    long long true_cells = 0;
    double diameter_error = 0.0;  // +- cell * sqrt(2)
};

/// 4-connected labeling (run-based union-find). Component ids follow
/// row-major discovery order, independent of worker count.
struct LabelField {
    struct Run {
        Eigen::Index i0 = 0, i1 = 0;  // [i0, i1)
        int component = -1;
    };
    std::vector<std::vector<Run>> rows;
    int n_components = 0;

    int label_at(Eigen::Index i, Eigen::Index j) const;
};

LabelField label_field(const LevelSetRaster& raster);
ComponentReport component_report(const LevelSetRaster& raster, const LabelField& field);
ComponentReport label_components(const LevelSetRaster& raster);

struct ClaimVerdict {
    bool pass = false;
    std::vector<double> top_diameters;
};

/// PASS iff at least n_required components satisfy
/// diameter + cell*sqrt(2) >= min_diameter. Vacuously true for n_required <= 0.
ClaimVerdict check_claim(const ComponentReport& report, int n_required, double min_diameter);

/// Total length of the union of the projections of all true cells onto the
/// given unit direction, each cell center inflated to an interval of length
/// `cell` (sweep-line union).
double projected_cover_length(const LevelSetRaster& raster, Complex direction);

/// Number of true cells farther than epsilon from every strip (outline or
/// interior) plus the number of true cells outside the ellipse domain.
long long containment_violations(const LevelSetRaster& raster,
                                 std::span<const ClosedCurve> strips,
                                 double epsilon, double domain_c);

/// Text raster: header "nx ny x0 y0 x1 y1 level" then ny row-major 0/1 rows.
void save_raster_text(const LevelSetRaster& raster, const std::filesystem::path& path);
LevelSetRaster load_raster_text(const std::filesystem::path& path);

struct ComponentContour {
    int id = 0;
    std::vector<std::vector<Complex>> loops;
};

/// Marching-squares outline of every component, saddle cases resolved
/// consistently with 4-connectivity. Loops are returned per component in id
/// order; outer loops run counterclockwise.
std::vector<ComponentContour> component_contours(const LevelSetRaster& raster,
                                                 const LabelField& field);

struct SvgOverlay {
    ClosedCurve curve;
    std::string stroke = "#555555";
};

void write_svg(const std::filesystem::path& path, const std::array<double, 4>& bbox,
               const std::vector<ComponentContour>& components,
               const std::vector<SvgOverlay>& overlays);

}  // namespace lemniscate
