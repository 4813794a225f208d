#pragma once

#include <memory>
#include <span>
#include <vector>

#include "gem/field.hpp"
#include "gem/meshless.hpp"
#include "gem/spatial_index.hpp"

namespace gem::meshless {

struct PUOptions {
    /// Patch radius as a multiple of the node's target spacing.
    double radius_factor = 2.5;
    /// Points outside every patch but within this multiple of the nearest
    /// patch radius are evaluated by that patch's local fit.
    double extension_factor = 2.0;
};

/// Wendland C2 blending weight (1 - r/R)^4 (4 r/R + 1) on [0, R].
double wendland(double r, double radius);

namespace detail {
struct PUGeometry;
}

/// Global approximation blending per-node quadratic least-squares fits.
class PUInterpolant {
  public:
    /// Shepard-blended value; throws CoverageError outside the extended cover.
    [[nodiscard]] double operator()(const Vec2& p) const;
    [[nodiscard]] double eval(const Vec2& p) const { return (*this)(p); }

    /// Normalized blending weights of the patches covering p, as (node, weight).
    [[nodiscard]] std::vector<std::pair<int, double>> blend_weights(const Vec2& p) const;
    [[nodiscard]] bool covers(const Vec2& p) const;

    /// Local fit of patch i evaluated at p.
    [[nodiscard]] double local_value(std::size_t patch, const Vec2& p) const;

    [[nodiscard]] std::uint64_t generation() const;

  private:
    friend class PUApproximator;
    PUInterpolant(std::shared_ptr<const detail::PUGeometry> geo, std::vector<double> coeffs)
        : geo_(std::move(geo)), coeffs_(std::move(coeffs))
    {
    }

    std::shared_ptr<const detail::PUGeometry> geo_;
    std::vector<double> coeffs_;  // kBasisSize per patch
};

/// Geometry-only part of the PU construction (patch layout and local
/// pseudo-inverses). Reused for every field on the same node set.
class PUApproximator {
  public:
    PUApproximator(const NodeSet& nodes, const Stencils& stencils, PUOptions options = {});

    [[nodiscard]] PUInterpolant fit(std::span<const double> values) const;
    [[nodiscard]] PUInterpolant fit(const ScalarField& field) const;

    /// Fit of values + (values - fit(values) at the nodes). The plain fit
    /// smooths; repeated transfers between node sets compound that, and one
    /// residual pass removes most of it. Still exact for quadratics.
    [[nodiscard]] PUInterpolant fit_corrected(std::span<const double> values) const;
    [[nodiscard]] PUInterpolant fit_corrected(const ScalarField& field) const;

    /// Throws CoverageError with the first uncovered location among `samples`.
    void verify_coverage(std::span<const Vec2> samples) const;

  private:
    std::shared_ptr<const detail::PUGeometry> geo_;
};

PUInterpolant build_pu(const NodeSet& nodes, const ScalarField& values, PUOptions options = {},
                       int support_size = 12);
double pu_eval(const PUInterpolant& interp, const Vec2& point);

}  // namespace gem::meshless
