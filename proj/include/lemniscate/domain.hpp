#pragma once

#include "lemniscate/geometry.hpp"

namespace lemniscate {

/// Ellipse with foci 0 and c, the image of the circle |z| = 4/c under the
/// shifted Joukowski map. Semi-axes are 1 +- c^2/16, so (a + b)/2 = 1 and
/// the logarithmic capacity is exactly 1 for every c in (0, 4).
struct EllipseDomain {
    double c = 0.0;

    double center_x() const { return c / 2.0; }
    double semi_major() const { return 1.0 + c * c / 16.0; }
    double semi_minor() const { return 1.0 - c * c / 16.0; }
};

/// Validates c in (0, 4).
EllipseDomain make_domain(double c);

/// phi(z) = (c/4)(z + 1/z + 2). Maps the exterior of the unit disk onto the
/// complement of the segment [0, c]; the circle |z| = 4/c maps onto the
/// domain's boundary ellipse.
Complex joukowski_map(Complex z, double c);

/// Boundary ellipse sampled at `samples` uniform angles, counterclockwise.
ClosedCurve domain_boundary(double c, int samples);

/// Membership in the ellipse shrunk by `margin` on both semi-axes.
bool domain_contains(double c, Complex z, double margin = 0.0);

/// (a + b)/2, identically 1.
double domain_capacity(double c);

}  // namespace lemniscate
