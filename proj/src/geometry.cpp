#include "lemniscate/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "lemniscate/errors.hpp"

namespace lemniscate {

namespace {

constexpr double kEdgeTolerance = 1e-12;

double cross(Complex o, Complex a, Complex b) {
    return (a.real() - o.real()) * (b.imag() - o.imag()) -
           (a.imag() - o.imag()) * (b.real() - o.real());
}

double dist2(Complex a, Complex b) {
    const double dx = a.real() - b.real();
    const double dy = a.imag() - b.imag();
    return dx * dx + dy * dy;
}

int sgn(double x) { return (x > 0.0) - (x < 0.0); }

bool on_segment_collinear(Complex p, Complex a, Complex b) {
    return std::min(a.real(), b.real()) <= p.real() &&
           p.real() <= std::max(a.real(), b.real()) &&
           std::min(a.imag(), b.imag()) <= p.imag() &&
           p.imag() <= std::max(a.imag(), b.imag());
}

bool segments_intersect(Complex a, Complex b, Complex c, Complex d) {
    const double d1 = cross(c, d, a);
    const double d2 = cross(c, d, b);
    const double d3 = cross(a, b, c);
    const double d4 = cross(a, b, d);
    if (sgn(d1) * sgn(d2) < 0 && sgn(d3) * sgn(d4) < 0) return true;
    if (d1 == 0.0 && on_segment_collinear(a, c, d)) return true;
    if (d2 == 0.0 && on_segment_collinear(b, c, d)) return true;
    if (d3 == 0.0 && on_segment_collinear(c, a, b)) return true;
    if (d4 == 0.0 && on_segment_collinear(d, a, b)) return true;
    return false;
}

double brute_diameter(std::span<const Complex> pts) {
    double best = 0.0;
    for (std::size_t i = 0; i < pts.size(); ++i)
        for (std::size_t j = i + 1; j < pts.size(); ++j)
            best = std::max(best, dist2(pts[i], pts[j]));
    return std::sqrt(best);
}

// Rotating calipers over a strictly convex counterclockwise hull; parallel
// edges additionally compare against the advanced antipodal vertex.
double hull_diameter(const std::vector<Complex>& h) {
    const std::size_t m = h.size();
    if (m <= 1) return 0.0;
    if (m == 2) return std::sqrt(dist2(h[0], h[1]));
    double best = 0.0;
    std::size_t j = 1;
    std::size_t advances = 0;
    for (std::size_t i = 0; i < m; ++i) {
        const Complex a = h[i];
        const Complex b = h[(i + 1) % m];
        for (;;) {
            const std::size_t jn = (j + 1) % m;
            const double c = (b.real() - a.real()) * (h[jn].imag() - h[j].imag()) -
                             (b.imag() - a.imag()) * (h[jn].real() - h[j].real());
            if (c > 0.0 && advances++ < 4 * m) {
                j = jn;
                best = std::max({best, dist2(a, h[j]), dist2(b, h[j])});
            } else {
                if (c == 0.0)
                    best = std::max({best, dist2(a, h[jn]), dist2(b, h[jn])});
                break;
            }
        }
        best = std::max({best, dist2(a, h[j]), dist2(b, h[j])});
    }
    return std::sqrt(best);
}

}  // namespace

double ClosedCurve::perimeter() const {
    const std::size_t n = vertices.size();
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        total += std::abs(vertices[(i + 1) % n] - vertices[i]);
    return total;
}

double ClosedCurve::signed_area() const {
    const std::size_t n = vertices.size();
    double twice = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const Complex a = vertices[i];
        const Complex b = vertices[(i + 1) % n];
        twice += a.real() * b.imag() - b.real() * a.imag();
    }
    return 0.5 * twice;
}

bool ClosedCurve::is_simple() const {
    const std::size_t n = vertices.size();
    if (n < 3) return false;
    for (std::size_t i = 0; i < n; ++i) {
        if (vertices[i] == vertices[(i + 1) % n]) return false;
        for (std::size_t j = i + 1; j < n; ++j) {
            // Skip edges sharing a vertex.
            if (j == i || (j + 1) % n == i || (i + 1) % n == j) continue;
            if (segments_intersect(vertices[i], vertices[(i + 1) % n],
                                   vertices[j], vertices[(j + 1) % n]))
                return false;
        }
    }
    return true;
}

std::array<double, 4> ClosedCurve::bounding_box() const {
    double x0 = std::numeric_limits<double>::infinity(), y0 = x0;
    double x1 = -x0, y1 = -x0;
    for (const Complex& v : vertices) {
        x0 = std::min(x0, v.real());
        y0 = std::min(y0, v.imag());
        x1 = std::max(x1, v.real());
        y1 = std::max(y1, v.imag());
    }
    return {x0, y0, x1, y1};
}

bool point_in_curve(const ClosedCurve& curve, Complex z) {
    const auto& v = curve.vertices;
    const std::size_t n = v.size();
    if (n == 0) return false;
    for (std::size_t i = 0; i < n; ++i)
        if (point_segment_distance(z, v[i], v[(i + 1) % n]) <= kEdgeTolerance)
            return true;
    bool inside = false;
    for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
        const bool above_i = v[i].imag() > z.imag();
        const bool above_j = v[j].imag() > z.imag();
        if (above_i != above_j) {
            const double x_cross =
                v[j].real() + (z.imag() - v[j].imag()) *
                                  (v[i].real() - v[j].real()) /
                                  (v[i].imag() - v[j].imag());
            if (z.real() < x_cross) inside = !inside;
        }
    }
    return inside;
}

double set_diameter(std::span<const Complex> points) {
    if (points.empty()) throw ParameterError("set_diameter: empty point set");
    if (points.size() < 32) return brute_diameter(points);
    auto hull = convex_hull(std::vector<Complex>(points.begin(), points.end()));
    return hull_diameter(hull);
}

double curve_separation(const ClosedCurve& a, const ClosedCurve& b) {
    const std::size_t na = a.vertices.size();
    const std::size_t nb = b.vertices.size();
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < na; ++i) {
        const Complex a0 = a.vertices[i];
        const Complex a1 = a.vertices[(i + 1) % na];
        for (std::size_t j = 0; j < nb; ++j) {
            const Complex b0 = b.vertices[j];
            const Complex b1 = b.vertices[(j + 1) % nb];
            best = std::min(best, segment_segment_distance(a0, a1, b0, b1));
            if (best == 0.0) return 0.0;
        }
    }
    return best;
}

double point_segment_distance(Complex p, Complex a, Complex b) {
    const Complex ab = b - a;
    const double l2 = std::norm(ab);
    if (l2 == 0.0) return std::abs(p - a);
    double t = ((p.real() - a.real()) * ab.real() + (p.imag() - a.imag()) * ab.imag()) / l2;
    t = std::clamp(t, 0.0, 1.0);
    return std::abs(p - (a + t * ab));
}

double segment_segment_distance(Complex a0, Complex a1, Complex b0, Complex b1) {
    if (segments_intersect(a0, a1, b0, b1)) return 0.0;
    return std::min(std::min(point_segment_distance(a0, b0, b1),
                             point_segment_distance(a1, b0, b1)),
                    std::min(point_segment_distance(b0, a0, a1),
                             point_segment_distance(b1, a0, a1)));
}

double curve_point_distance(const ClosedCurve& curve, Complex z) {
    const std::size_t n = curve.vertices.size();
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < n; ++i)
        best = std::min(best, point_segment_distance(z, curve.vertices[i],
                                                     curve.vertices[(i + 1) % n]));
    return best;
}

std::vector<Complex> convex_hull(std::vector<Complex> points) {
    std::sort(points.begin(), points.end(), [](Complex a, Complex b) {
        return a.real() < b.real() || (a.real() == b.real() && a.imag() < b.imag());
    });
    points.erase(std::unique(points.begin(), points.end()), points.end());
    const std::size_t n = points.size();
    if (n <= 2) return points;
    std::vector<Complex> hull(2 * n);
    std::size_t k = 0;
    for (std::size_t i = 0; i < n; ++i) {  // lower
        while (k >= 2 && cross(hull[k - 2], hull[k - 1], points[i]) <= 0.0) --k;
        hull[k++] = points[i];
    }
    for (std::size_t i = n - 1, t = k + 1; i-- > 0;) {  // upper
        while (k >= t && cross(hull[k - 2], hull[k - 1], points[i]) <= 0.0) --k;
        hull[k++] = points[i];
    }
    hull.resize(k - 1);
    return hull;
}

Eigen::ArrayXcd sample_boundary(std::span<const ClosedCurve> curves, Eigen::Index count) {
    if (curves.empty()) throw ParameterError("sample_boundary: no curves");
    if (count <= 0) throw ParameterError("sample_boundary: count must be positive");
    std::vector<double> lengths(curves.size());
    double total = 0.0;
    for (std::size_t i = 0; i < curves.size(); ++i) {
        lengths[i] = curves[i].perimeter();
        total += lengths[i];
    }
    if (!(total > 0.0)) throw DegenerateInputError("sample_boundary: zero total boundary length");

    Eigen::ArrayXcd out(count);
    Eigen::Index mark = 0;
    double cum = 0.0;
    for (std::size_t ci = 0; ci < curves.size(); ++ci) {
        cum += lengths[ci];
        Eigen::Index next_mark = (ci + 1 == curves.size())
                                     ? count
                                     : static_cast<Eigen::Index>(
                                           std::llround(static_cast<double>(count) * cum / total));
        next_mark = std::min(next_mark, count);
        const Eigen::Index m = next_mark - mark;
        if (m <= 0) continue;
        const auto& v = curves[ci].vertices;
        const std::size_t nv = v.size();
        const double step = lengths[ci] / static_cast<double>(m);
        std::size_t edge = 0;
        double edge_start = 0.0;
        double edge_len = std::abs(v[(edge + 1) % nv] - v[edge]);
        for (Eigen::Index k = 0; k < m; ++k) {
            const double s = static_cast<double>(k) * step;
            while (edge + 1 < nv + 1 && edge_start + edge_len < s && edge + 1 < nv) {
                edge_start += edge_len;
                ++edge;
                edge_len = std::abs(v[(edge + 1) % nv] - v[edge]);
            }
            const double t = edge_len > 0.0 ? std::clamp((s - edge_start) / edge_len, 0.0, 1.0) : 0.0;
            out[mark + k] = v[edge] + t * (v[(edge + 1) % nv] - v[edge]);
        }
        mark = next_mark;
    }
    return out;
}

}  // namespace lemniscate
