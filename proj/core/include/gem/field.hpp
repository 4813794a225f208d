#pragma once

#include <cstdint>
#include <vector>

#include "gem/node_set.hpp"

namespace gem {

/// Nodal values of the dimensionless concentration, bound to one NodeSet.
struct ScalarField {
    std::vector<double> values;
    std::uint64_t generation = 0;

    ScalarField() = default;
    ScalarField(std::vector<double> v, std::uint64_t gen) : values(std::move(v)), generation(gen) {}
    ScalarField(const NodeSet& nodes, double value) : values(nodes.size(), value), generation(nodes.generation) {}

    [[nodiscard]] std::size_t size() const { return values.size(); }
    double& operator[](std::size_t i) { return values[i]; }
    double operator[](std::size_t i) const { return values[i]; }
};

/// Throws AlignmentError unless `field` was built for `nodes`.
void require_aligned(const ScalarField& field, const NodeSet& nodes, const char* where);

}  // namespace gem
