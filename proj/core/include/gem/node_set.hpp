#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "gem/geometry.hpp"

namespace gem {

enum class NodeKind : std::uint8_t { interior = 0, envelope = 1, wall = 2 };

/// Scattered discretization of the liquid region.
///
/// Wall normals point out of the liquid; envelope normals point out of the
/// grain (into the liquid). Interior nodes carry a zero normal. Every node set
/// gets a fresh generation tag when finalized; fields and weight stores record
/// the tag of the set they were built for.
struct NodeSet {
    std::vector<Vec2> positions;
    std::vector<NodeKind> kinds;
    std::vector<Vec2> normals;
    std::vector<double> spacing;
    std::uint64_t generation = 0;

    [[nodiscard]] std::size_t size() const { return positions.size(); }
    [[nodiscard]] bool is_boundary(std::size_t i) const { return kinds[i] != NodeKind::interior; }

    std::size_t add(const Vec2& p, NodeKind kind, const Vec2& normal, double h);

    /// Assigns a new unique generation tag. Call after any mutation.
    void finalize();

    [[nodiscard]] std::vector<std::size_t> indices_of(NodeKind kind) const;
    [[nodiscard]] double min_spacing() const;
    [[nodiscard]] double max_spacing() const;
};

std::uint64_t next_generation();

}  // namespace gem
