#pragma once

#include <cstdint>

#include "gem/envelope.hpp"
#include "gem/node_set.hpp"

namespace gem::nodes {

/// Liquid region: the square [-a_m/2, a_m/2]^2 minus the grain enclosed by
/// the envelope, with spacing graded linearly from h_d on the envelope to
/// h_m on the wall. An empty envelope leaves the plain square at spacing h_d.
struct DomainSpec {
    double a_m = 20.0;
    envelope::EnvelopeCurve envelope;
    double h_d = 0.05;
    double h_m = 0.15;

    [[nodiscard]] double half_side() const { return 0.5 * a_m; }
    [[nodiscard]] double wall_distance(const Vec2& p) const;
    [[nodiscard]] bool in_liquid(const Vec2& p) const;
    void validate() const;
};

struct FillOptions {
    std::uint64_t seed = 1;
    int candidates = 15;        // candidates per expanded node
    double proximity = 0.99;    // reject candidates within proximity * h(candidate)
};

double spacing_function(const DomainSpec& spec, const Vec2& point);

/// Wall nodes at spacing close to h_m (corners included, diagonal corner
/// normals) followed by the envelope nodes at arc spacing close to h_d.
NodeSet discretize_boundaries(const DomainSpec& spec);

/// Advancing-front fill seeded from the boundary nodes.
NodeSet fill_interior(const DomainSpec& spec, const NodeSet& boundary, const FillOptions& options = {});

/// discretize_boundaries followed by fill_interior.
NodeSet generate(const DomainSpec& spec, const FillOptions& options = {});

/// Advancing-front fill of the unit-free box [lo, hi]^2 with constant spacing
/// and no boundary nodes; used for convergence studies.
NodeSet fill_box(const Vec2& lo, const Vec2& hi, double h, const FillOptions& options = {});

}  // namespace gem::nodes
