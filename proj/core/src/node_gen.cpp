#include "gem/node_gen.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <numbers>
#include <random>
#include <string>

#include "gem/errors.hpp"
#include "gem/spatial_index.hpp"

namespace gem::nodes {

double DomainSpec::wall_distance(const Vec2& p) const
{
    return half_side() - std::max(std::abs(p.x()), std::abs(p.y()));
}

bool DomainSpec::in_liquid(const Vec2& p) const
{
    return wall_distance(p) > 0.0 && !envelope.contains(p);
}

void DomainSpec::validate() const
{
    if (!(a_m > 0.0)) throw DomainError("DomainSpec: side length must be positive");
    if (!(h_d > 0.0) || h_d > h_m) throw DomainError("DomainSpec: require 0 < h_d <= h_m");
    for (const auto& p : envelope.nodes())
        if (!(wall_distance(p) > 0.0)) throw GeometryError("DomainSpec: envelope leaves the square");
}

double spacing_function(const DomainSpec& spec, const Vec2& point)
{
    const double de = spec.envelope.size() >= 3 ? spec.envelope.distance(point) : 0.0;
    const double dw = std::max(spec.wall_distance(point), 0.0);
    const double denom = de + dw;
    const double ratio = denom > 0.0 ? std::clamp(de / denom, 0.0, 1.0) : 0.0;
    return spec.h_d + (spec.h_m - spec.h_d) * ratio;
}

NodeSet discretize_boundaries(const DomainSpec& spec)
{
    spec.validate();
    if (!spec.envelope.is_simple()) throw GeometryError("discretize_boundaries: envelope self-intersects");

    NodeSet out;
    const double a = spec.half_side();
    const int per_side = std::max(1, static_cast<int>(std::ceil(spec.a_m / spec.h_m - 1e-9)));
    const double step = spec.a_m / per_side;
    const double diag = std::numbers::sqrt2 / 2.0;
    // Counter-clockwise from the lower-left corner; each side owns its first corner.
    const std::array<Vec2, 4> corners = {Vec2(-a, -a), Vec2(a, -a), Vec2(a, a), Vec2(-a, a)};
    const std::array<Vec2, 4> side_normals = {Vec2(0, -1), Vec2(1, 0), Vec2(0, 1), Vec2(-1, 0)};
    for (int s = 0; s < 4; ++s) {
        const Vec2& c0 = corners[static_cast<std::size_t>(s)];
        const Vec2 dir = (corners[static_cast<std::size_t>((s + 1) % 4)] - c0) / spec.a_m;
        const Vec2 corner_normal = Vec2(c0.x() > 0 ? diag : -diag, c0.y() > 0 ? diag : -diag);
        out.add(c0, NodeKind::wall, corner_normal, spec.h_m);
        for (int k = 1; k < per_side; ++k)
            out.add(c0 + (k * step) * dir, NodeKind::wall, side_normals[static_cast<std::size_t>(s)], spec.h_m);
    }

    if (spec.envelope.size() == 0) {
        out.finalize();
        return out;
    }
    const envelope::EnvelopeCurve env =
        spec.envelope.is_uniform(spec.h_d) ? spec.envelope : spec.envelope.resampled(spec.h_d);
    for (std::size_t i = 0; i < env.size(); ++i) out.add(env.nodes()[i], NodeKind::envelope, env.normal(i), spec.h_d);
    out.finalize();
    return out;
}

namespace {

// Portable uniform [0, 1) from the 53 high bits.
double uniform01(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

template <class Spacing, class Inside>
void advance_front(NodeSet& nodes, GridIndex& index, std::size_t seeds_begin, Spacing&& spacing, double min_spacing,
                   Inside&& inside, const FillOptions& options, NodeKind kind = NodeKind::interior)
{
    std::mt19937_64 rng(options.seed);
    std::deque<std::size_t> front;
    for (std::size_t i = seeds_begin; i < nodes.size(); ++i) front.push_back(i);
    const double two_pi = 2.0 * std::numbers::pi;
    while (!front.empty()) {
        const std::size_t i = front.front();
        front.pop_front();
        const Vec2 p = nodes.positions[i];
        const double h = nodes.spacing[i];
        const double phase = two_pi * uniform01(rng);
        for (int k = 0; k < options.candidates; ++k) {
            const double phi = phase + two_pi * k / options.candidates;
            const Vec2 c = p + h * Vec2(std::cos(phi), std::sin(phi));
            if (!inside(c)) continue;
            // spacing(c) >= min_spacing, so this rejects without the costly spacing query.
            if (index.any_within(c, options.proximity * min_spacing)) continue;
            const double hc = spacing(c);
            if (index.any_within(c, options.proximity * hc)) continue;
            index.insert(c);
            front.push_back(nodes.add(c, kind, Vec2::Zero(), hc));
        }
    }
}

}  // namespace

NodeSet fill_interior(const DomainSpec& spec, const NodeSet& boundary, const FillOptions& options)
{
    spec.validate();
    NodeSet nodes = boundary;
    const double a = spec.half_side();
    GridIndex index(Vec2(-a, -a), Vec2(a, a), spec.h_d);
    for (const auto& p : nodes.positions) index.insert(p);

    const auto inside = [&](const Vec2& c) { return spec.in_liquid(c); };
    const auto spacing = [&](const Vec2& c) { return spacing_function(spec, c); };
    advance_front(nodes, index, 0, spacing, spec.h_d, inside, options);
    if (nodes.size() == boundary.size()) throw FillError("fill_interior: no interior node could be placed");
    nodes.finalize();
    return nodes;
}

NodeSet generate(const DomainSpec& spec, const FillOptions& options)
{
    return fill_interior(spec, discretize_boundaries(spec), options);
}

NodeSet fill_box(const Vec2& lo, const Vec2& hi, double h, const FillOptions& options)
{
    NodeSet nodes;
    GridIndex index(lo, hi, h);
    const Vec2 seed = 0.5 * (lo + hi);
    nodes.add(seed, NodeKind::interior, Vec2::Zero(), h);
    index.insert(seed);
    const auto inside = [&](const Vec2& c) {
        return c.x() >= lo.x() && c.x() <= hi.x() && c.y() >= lo.y() && c.y() <= hi.y();
    };
    advance_front(nodes, index, 0, [h](const Vec2&) { return h; }, h, inside, options);
    nodes.finalize();
    return nodes;
}

}  // namespace gem::nodes
