#pragma once

#include <filesystem>
#include <memory>
#include <string>
#include <vector>

#include "lemniscate/capacity.hpp"
#include "lemniscate/domain.hpp"
#include "lemniscate/errors.hpp"
#include "lemniscate/levelset.hpp"

namespace lemniscate {

struct Strip {
    double centerline_y = 0.0;
    double half_length = 0.0;
    double half_height = 0.0;
    ClosedCurve outline;  // rounded rectangle, counterclockwise
};

/// N disjoint strips inside the ellipse domain, symmetric about x = c/2,
/// each of diameter >= c_target.
struct StripFamily {
    double c = 0.0;
    double c_target = 0.0;
    std::vector<Strip> strips;
    double separation = 0.0;  // min pairwise outline distance; for a single
                              // strip, its distance to the domain boundary
    double margin = 0.0;      // largest domain_contains margin every outline
                              // vertex satisfies
    std::vector<ClosedCurve> outlines() const;
};

StripFamily build_strips(double c, int n_strips, double c_target, double gap_fraction = 0.5);

/// Leja points over a pool of pool_factor * degree arc-length samples of the
/// strip outlines.
LejaConfiguration leja_roots(const StripFamily& strips, int degree, int pool_factor);

/// Max of prod |z - root_k| over refinement * pool-density outline samples.
/// The maximum-modulus principle puts the sup on the outlines.
double boundary_sup_norm(const LejaConfiguration& roots, const StripFamily& strips,
                         int refinement);
double boundary_sup_norm_log(const LejaConfiguration& roots, const StripFamily& strips,
                             int refinement);

/// Monic polynomial in root-product form: p(z) = prod_k (z - roots[k]).
struct MonicLemniscatePolynomial {
    int degree = 0;
    Eigen::ArrayXcd roots;
    double sup_norm_m = 1.0;  // sup of the pre-scaling product over the strips
    double scale_w = 1.0;     // M^(-1/d)
    std::string provenance;
};

/// Rescale roots by w = M^(-1/d) so that prod (z - w*root_k) = (1/M) *
/// prod (z/w - root_k): the unit sublevel set of the normalized product,
/// stretched by w, realized by a monic polynomial.
MonicLemniscatePolynomial monicize(const LejaConfiguration& roots, double sup_norm);

struct SynthesisConfig {
    double c_target = -1.0;    // default 0.96 * c
    double gap_fraction = 0.5;
    int d_start = -1;          // default 32 * N
    int d_max = 4096;
    double cell = -1.0;        // default separation / 4
    double epsilon = -1.0;     // default separation / 2
    int pool_factor = 16;
    int refinement = 10;
    int threads = 1;
};

struct DegreeAttempt {
    int degree = 0;
    double sup_norm_m = 0.0;
    double log_sup_norm = 0.0;
    double scale_w = 0.0;
    long long containment_violations = 0;
    int n_components = 0;
};

struct SynthesisResult {
    double c = 0.0;
    int n_required = 0;
    SynthesisConfig config;  // with defaults resolved
    StripFamily strips;
    std::vector<DegreeAttempt> attempts;
    bool converged = false;
    MonicLemniscatePolynomial polynomial;  // valid iff converged
    LevelSetRaster raster_before;          // {|q|/M <= 1} at the last degree tried
    ComponentReport components_before;
    LevelSetRaster raster;                 // {|p| <= 1}, same grid scaled by w
    ComponentReport components;
    ClaimVerdict claim;
};

class NonConvergenceError : public Error {
public:
    NonConvergenceError(const std::string& what, SynthesisResult partial)
        : Error(what),
          partial_(std::make_shared<SynthesisResult>(std::move(partial))) {}
    const SynthesisResult& partial() const { return *partial_; }

private:
    std::shared_ptr<SynthesisResult> partial_;
};

/// Build strips once, then walk the degree schedule (d_start doubling up to
/// d_max). A degree is accepted when the raster of the normalized product
/// stays within epsilon of the strips, M <= 1, and at least N components
/// appear; the accepted configuration is monicized and re-verified on the
/// scaled grid. Throws NonConvergenceError with the partial result when the
/// schedule is exhausted.
SynthesisResult synthesize(double c, int n_components, SynthesisConfig config = {});

std::string serialize_polynomial(const MonicLemniscatePolynomial& poly);
MonicLemniscatePolynomial parse_polynomial(const std::string& text);
void save_polynomial(const MonicLemniscatePolynomial& poly, const std::filesystem::path& path);
MonicLemniscatePolynomial load_polynomial(const std::filesystem::path& path);

/// |prod_k (1 - r_k/z) - 1| at z = radius_factor * max|r_k| on the positive
/// real axis.
double monic_residual(const Eigen::ArrayXcd& roots, double radius_factor = 1e3);

}  // namespace lemniscate
