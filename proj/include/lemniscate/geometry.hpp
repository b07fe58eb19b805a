#pragma once

#include <array>
#include <complex>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace lemniscate {

using Complex = std::complex<double>;

/// Closed polyline; the last vertex connects back to the first.
struct ClosedCurve {
    std::vector<Complex> vertices;

    double perimeter() const;
    double signed_area() const;
    bool is_counterclockwise() const { return signed_area() > 0.0; }
    bool is_simple() const;
    std::array<double, 4> bounding_box() const;  // {x0, y0, x1, y1}
};

/// True iff z lies inside the curve. Points within 1e-12 of an edge count
/// as inside.
bool point_in_curve(const ClosedCurve& curve, Complex z);

/// Maximum pairwise Euclidean distance. Brute force below 32 points,
/// convex hull + rotating calipers above.
double set_diameter(std::span<const Complex> points);

/// Minimum distance between the boundaries of two curves (0 if they touch
/// or cross).
double curve_separation(const ClosedCurve& a, const ClosedCurve& b);

double point_segment_distance(Complex p, Complex a, Complex b);
double segment_segment_distance(Complex a0, Complex a1, Complex b0, Complex b1);

/// Distance from z to the curve's boundary polyline.
double curve_point_distance(const ClosedCurve& curve, Complex z);

/// Counterclockwise strictly convex hull (monotone chain).
std::vector<Complex> convex_hull(std::vector<Complex> points);

/// Arc-length uniform samples over a family of closed polylines, allocated
/// proportionally to perimeter. Flattened (zero-area) curves are allowed.
Eigen::ArrayXcd sample_boundary(std::span<const ClosedCurve> curves, Eigen::Index count);

}  // namespace lemniscate
