#include "lemniscate/capacity.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <vector>

#include "lemniscate/errors.hpp"

namespace lemniscate {

namespace {

constexpr double kDuplicateTolerance = 1e-14;

// Keep-first (by original index) removal of points within tolerance of an
// earlier point; sorted window scan keeps this near-linear.
Eigen::ArrayXcd drop_duplicates(const Eigen::ArrayXcd& points, double tol) {
    const Eigen::Index n = points.size();
    std::vector<Eigen::Index> order(n);
    std::iota(order.begin(), order.end(), Eigen::Index{0});
    std::sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) {
        const Complex pa = points[a], pb = points[b];
        return pa.real() < pb.real() ||
               (pa.real() == pb.real() && pa.imag() < pb.imag());
    });
    std::vector<char> dup(n, 0);
    const double tol2 = tol * tol;
    for (std::size_t s = 0; s < order.size(); ++s) {
        if (dup[order[s]]) continue;
        for (std::size_t t = s + 1; t < order.size(); ++t) {
            if (points[order[t]].real() - points[order[s]].real() > tol) break;
            if (dup[order[t]]) continue;
            if (std::norm(points[order[t]] - points[order[s]]) <= tol2) {
                const Eigen::Index drop = std::max(order[s], order[t]);
                dup[drop] = 1;
                if (drop == order[s]) break;
            }
        }
    }
    Eigen::Index kept = 0;
    for (Eigen::Index i = 0; i < n; ++i) kept += !dup[i];
    Eigen::ArrayXcd out(kept);
    Eigen::Index w = 0;
    for (Eigen::Index i = 0; i < n; ++i)
        if (!dup[i]) out[w++] = points[i];
    return out;
}

Eigen::Index argmax_lex(const Eigen::ArrayXd& score) {
    Eigen::Index best = -1;
    double best_value = -std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 0; i < score.size(); ++i) {
        if (score[i] > best_value) {
            best_value = score[i];
            best = i;
        }
    }
    return best;
}

}  // namespace

double transfinite_diameter(const Eigen::ArrayXcd& points) {
    const Eigen::Index n = points.size();
    if (n < 2) throw ParameterError("transfinite_diameter: need at least two points");
    double log_sum = 0.0;
    for (Eigen::Index i = 0; i + 1 < n; ++i) {
        const Eigen::ArrayXd d2 = (points.tail(n - 1 - i) - points[i]).abs2();
        if ((d2 < kDuplicateTolerance * kDuplicateTolerance).any())
            throw DegenerateInputError("transfinite_diameter: coincident points");
        log_sum += 0.5 * d2.log().sum();
    }
    const double pairs = 0.5 * static_cast<double>(n) * static_cast<double>(n - 1);
    return std::exp(log_sum / pairs);
}

LejaConfiguration leja_select(const Eigen::ArrayXcd& candidates, Eigen::Index n,
                              std::string source) {
    const Eigen::Index m = candidates.size();
    if (n < 1) throw ParameterError("leja_select: need n >= 1");
    if (n > m) throw ParameterError("leja_select: n exceeds the candidate pool");

    LejaConfiguration config;
    config.points.resize(n);
    config.candidate_pool_size = m;
    config.source = std::move(source);

    // First pick: maximum modulus, smallest index on ties.
    Eigen::ArrayXd score = candidates.abs2();
    Eigen::Index pick = argmax_lex(score);
    config.points[0] = candidates[pick];

    // Running sums of log distances to the chosen points. Chosen candidates
    // (and any coincident duplicates) drop to -inf and never win again.
    score = 0.5 * (candidates - config.points[0]).abs2().log();
    for (Eigen::Index k = 1; k < n; ++k) {
        pick = argmax_lex(score);
        if (pick < 0 || score[pick] == -std::numeric_limits<double>::infinity())
            throw DegenerateInputError("leja_select: candidate pool collapsed to coincident points");
        config.points[k] = candidates[pick];
        if (k + 1 < n)
            score += 0.5 * (candidates - config.points[k]).abs2().log();
    }
    return config;
}

CapacityEstimate estimate_capacity(std::span<const ClosedCurve> boundary,
                                   Eigen::Index n, Eigen::Index pool_factor) {
    if (n < 2) throw ParameterError("estimate_capacity: need n >= 2");
    if (pool_factor < 8) throw ParameterError("estimate_capacity: pool_factor must be >= 8");
    const Eigen::ArrayXcd pool =
        drop_duplicates(sample_boundary(boundary, pool_factor * n), kDuplicateTolerance);
    const LejaConfiguration leja = leja_select(pool, n, "boundary-pool");
    return {transfinite_diameter(leja.points), n, CapacityMethod::TransfiniteDiameter};
}

double closed_form_capacity(const ShapeDescriptor& shape) {
    return std::visit(
        [](const auto& s) -> double {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, SegmentShape>) {
                if (!(s.length > 0.0)) throw ParameterError("segment length must be positive");
                return s.length / 4.0;
            } else if constexpr (std::is_same_v<T, DiskShape>) {
                if (!(s.radius > 0.0)) throw ParameterError("disk radius must be positive");
                return s.radius;
            } else if constexpr (std::is_same_v<T, EllipseShape>) {
                if (!(s.semi_major > 0.0) || !(s.semi_minor > 0.0))
                    throw ParameterError("ellipse semi-axes must be positive");
                return (s.semi_major + s.semi_minor) / 2.0;
            } else {
                if (s.leading_coefficient == 0.0)
                    throw ParameterError("lemniscate leading coefficient must be nonzero");
                if (s.degree < 1) throw ParameterError("lemniscate degree must be positive");
                return std::pow(std::abs(s.leading_coefficient), -1.0 / s.degree);
            }
        },
        shape);
}

ClosedCurve segment_as_curve(double x0, double x1) {
    if (!(x1 > x0)) throw ParameterError("segment_as_curve: need x1 > x0");
    return {{Complex(x0, 0.0), Complex(x1, 0.0)}};
}

}  // namespace lemniscate
