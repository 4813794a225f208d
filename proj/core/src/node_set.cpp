#include "gem/node_set.hpp"

#include <algorithm>
#include <atomic>
#include <limits>

namespace gem {

std::uint64_t next_generation()
{
    static std::atomic<std::uint64_t> counter{0};
    return ++counter;
}

std::size_t NodeSet::add(const Vec2& p, NodeKind kind, const Vec2& normal, double h)
{
    positions.push_back(p);
    kinds.push_back(kind);
    normals.push_back(normal);
    spacing.push_back(h);
    return positions.size() - 1;
}

void NodeSet::finalize() { generation = next_generation(); }

std::vector<std::size_t> NodeSet::indices_of(NodeKind kind) const
{
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < kinds.size(); ++i)
        if (kinds[i] == kind) out.push_back(i);
    return out;
}

double NodeSet::min_spacing() const
{
    if (spacing.empty()) return 0.0;
    return *std::min_element(spacing.begin(), spacing.end());
}

double NodeSet::max_spacing() const
{
    if (spacing.empty()) return 0.0;
    return *std::max_element(spacing.begin(), spacing.end());
}

}  // namespace gem
