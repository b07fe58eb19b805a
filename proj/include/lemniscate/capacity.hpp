#pragma once

#include <string>
#include <variant>

#include "lemniscate/geometry.hpp"

namespace lemniscate {

/// Points picked greedily so that each new point maximizes the sum of log
/// distances to the ones already chosen (first pick: maximum modulus).
struct LejaConfiguration {
    Eigen::ArrayXcd points;
    Eigen::Index candidate_pool_size = 0;
    std::string source;
};

enum class CapacityMethod { TransfiniteDiameter, ClosedForm };

struct CapacityEstimate {
    double value = 0.0;
    Eigen::Index n_points = 0;
    CapacityMethod method = CapacityMethod::TransfiniteDiameter;
};

/// d_n = (prod_{i<j} |z_i - z_j|)^(2/(n(n-1))), evaluated in log space.
double transfinite_diameter(const Eigen::ArrayXcd& points);

/// Greedy selection of n points from a pool of distinct candidates.
/// Ties break toward the smaller candidate index.
LejaConfiguration leja_select(const Eigen::ArrayXcd& candidates, Eigen::Index n,
                              std::string source = {});

/// Transfinite diameter over Leja points drawn from a pool of
/// pool_factor * n arc-length uniform boundary samples.
CapacityEstimate estimate_capacity(std::span<const ClosedCurve> boundary,
                                   Eigen::Index n, Eigen::Index pool_factor);

struct SegmentShape { double length = 0.0; };
struct DiskShape { double radius = 0.0; };
struct EllipseShape { double semi_major = 0.0; double semi_minor = 0.0; };
struct LemniscateShape { double leading_coefficient = 0.0; int degree = 0; };

using ShapeDescriptor = std::variant<SegmentShape, DiskShape, EllipseShape, LemniscateShape>;

/// length/4, radius, (a+b)/2, |leading|^(-1/degree) respectively.
double closed_form_capacity(const ShapeDescriptor& shape);

/// Degenerate two-sided closed polyline covering [x0, x1] on the real axis,
/// usable with sample_boundary / estimate_capacity.
ClosedCurve segment_as_curve(double x0, double x1);

}  // namespace lemniscate
