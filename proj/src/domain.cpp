#include "lemniscate/domain.hpp"

#include <cmath>
#include <numbers>

#include "lemniscate/errors.hpp"

namespace lemniscate {

EllipseDomain make_domain(double c) {
    if (!std::isfinite(c) || !(c > 0.0 && c < 4.0))
        throw ParameterError("diameter parameter c must lie in (0, 4)");
    return {c};
}

Complex joukowski_map(Complex z, double c) {
    make_domain(c);
    if (z == Complex(0.0, 0.0))
        throw EvaluationDomainError("joukowski_map: z = 0 is outside the map's domain");
    return (c / 4.0) * (z + 1.0 / z + 2.0);
}

ClosedCurve domain_boundary(double c, int samples) {
    const EllipseDomain dom = make_domain(c);
    if (samples < 16) throw ParameterError("domain_boundary: need at least 16 samples");
    ClosedCurve curve;
    curve.vertices.reserve(samples);
    for (int k = 0; k < samples; ++k) {
        const double theta = 2.0 * std::numbers::pi * k / samples;
        curve.vertices.emplace_back(dom.semi_major() * std::cos(theta) + dom.center_x(),
                                    dom.semi_minor() * std::sin(theta));
    }
    return curve;
}

bool domain_contains(double c, Complex z, double margin) {
    const EllipseDomain dom = make_domain(c);
    if (!(margin >= 0.0) || margin >= dom.semi_minor())
        throw ParameterError("domain_contains: margin must lie in [0, semi-minor)");
    const double u = (z.real() - dom.center_x()) / (dom.semi_major() - margin);
    const double v = z.imag() / (dom.semi_minor() - margin);
    return u * u + v * v <= 1.0;
}

double domain_capacity(double c) {
    const EllipseDomain dom = make_domain(c);
    return (dom.semi_major() + dom.semi_minor()) / 2.0;
}

}  // namespace lemniscate
