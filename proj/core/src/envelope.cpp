#include "gem/envelope.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "gem/errors.hpp"

namespace gem::envelope {

namespace {

std::vector<Vec2> counter_clockwise(std::vector<Vec2> nodes)
{
    if (signed_area(nodes) < 0.0) std::reverse(nodes.begin() + 1, nodes.end());
    return nodes;
}

}  // namespace

EnvelopeCurve::EnvelopeCurve(std::vector<Vec2> nodes) : nodes_(counter_clockwise(std::move(nodes)))
{
    if (nodes_.size() < 3) throw GeometryError("EnvelopeCurve: need at least three nodes");
    spline_ = PeriodicSpline(nodes_);
    normals_.resize(nodes_.size());
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
        const Vec2 t = spline_.derivative(spline_.knot(i));
        const double len = t.norm();
        if (!(len > 0.0)) throw GeometryError("EnvelopeCurve: degenerate tangent at node " + std::to_string(i));
        normals_[i] = Vec2(t.y(), -t.x()) / len;
    }
    locator_ = PolygonLocator(nodes_);
}

EnvelopeCurve EnvelopeCurve::circle(const Vec2& center, double radius, double spacing)
{
    if (!(radius > 0.0 && spacing > 0.0)) throw DomainError("EnvelopeCurve::circle: radius and spacing must be positive");
    const auto count = static_cast<std::size_t>(
        std::max(8.0, std::round(2.0 * std::numbers::pi * radius / spacing)));
    std::vector<Vec2> nodes(count);
    for (std::size_t k = 0; k < count; ++k) {
        const double phi = 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(count);
        nodes[k] = center + radius * Vec2(std::cos(phi), std::sin(phi));
    }
    return EnvelopeCurve(std::move(nodes));
}

double EnvelopeCurve::area() const { return signed_area(nodes_); }

bool EnvelopeCurve::is_simple() const { return find_self_intersections(nodes_).empty(); }

bool EnvelopeCurve::is_uniform(double spacing, double rel_tol) const
{
    const std::size_t n = nodes_.size();
    for (std::size_t i = 0; i < n; ++i) {
        const double g = (nodes_[(i + 1) % n] - nodes_[i]).norm();
        if (std::abs(g - spacing) > rel_tol * spacing) return false;
    }
    return true;
}

EnvelopeCurve EnvelopeCurve::resampled(double spacing, double start) const
{
    const double L = spline_.length();
    const auto count = static_cast<std::size_t>(std::max(8.0, std::round(L / spacing)));
    std::vector<Vec2> out(count);
    for (std::size_t k = 0; k < count; ++k)
        out[k] = spline_.position(
            spline_.parameter_at_length(start + L * static_cast<double>(k) / static_cast<double>(count)));
    return EnvelopeCurve(std::move(out));
}

Vec2 outward_normal(const EnvelopeCurve& curve, std::size_t node)
{
    if (node >= curve.size()) throw DomainError("outward_normal: node index out of range");
    return curve.normal(node);
}

double growth_cosine(const Vec2& normal)
{
    if (std::abs(normal.norm() - 1.0) > 1e-6) throw DomainError("growth_cosine: normal must have unit length");
    double best = -1.0;
    for (const auto& d : kGrowthDirections) best = std::max(best, normal.x() * d[0] + normal.y() * d[1]);
    return best;
}

std::vector<Vec2> advect_nodes(const EnvelopeCurve& curve, std::span<const double> speeds, double dt)
{
    if (speeds.size() != curve.size())
        throw DomainError("advect_nodes: " + std::to_string(speeds.size()) + " speeds for " +
                          std::to_string(curve.size()) + " nodes");
    std::vector<Vec2> out(curve.size());
    for (std::size_t i = 0; i < curve.size(); ++i) {
        if (speeds[i] < 0.0) throw DomainError("advect_nodes: negative speed at node " + std::to_string(i));
        const Vec2& n = curve.normal(i);
        out[i] = curve.nodes()[i] + growth_cosine(n) * speeds[i] * dt * n;
    }
    return out;
}

namespace {

std::vector<Vec2> prune(std::span<const Vec2> points, double min_gap)
{
    std::vector<Vec2> kept;
    kept.reserve(points.size());
    for (const auto& p : points)
        if (kept.empty() || (p - kept.back()).norm() >= min_gap) kept.push_back(p);
    while (kept.size() > 1 && (kept.back() - kept.front()).norm() < min_gap) kept.pop_back();
    return kept;
}

Vec2 intersection_point(const Vec2& a0, const Vec2& a1, const Vec2& b0, const Vec2& b1)
{
    const Vec2 r = a1 - a0, s = b1 - b0;
    const double denom = cross(r, s);
    if (std::abs(denom) < 1e-300) return 0.5 * (a1 + b0);
    const double t = std::clamp(cross(b0 - a0, s) / denom, 0.0, 1.0);
    return a0 + t * r;
}

// Removes the smaller of the two loops created by the crossing of edges i and
// j (i < j), replacing it with the crossing point. Node 0 stays first unless
// it lies on the removed side.
std::vector<Vec2> cut_loop(const std::vector<Vec2>& poly, std::size_t i, std::size_t j)
{
    const std::size_t n = poly.size();
    const Vec2 x = intersection_point(poly[i], poly[(i + 1) % n], poly[j], poly[(j + 1) % n]);
    const std::size_t inner = j - i;  // nodes i+1 .. j
    std::vector<Vec2> out;
    if (inner <= n - inner) {
        out.insert(out.end(), poly.begin(), poly.begin() + static_cast<std::ptrdiff_t>(i + 1));
        out.push_back(x);
        out.insert(out.end(), poly.begin() + static_cast<std::ptrdiff_t>(j + 1), poly.end());
    } else {
        out.push_back(x);
        out.insert(out.end(), poly.begin() + static_cast<std::ptrdiff_t>(i + 1),
                   poly.begin() + static_cast<std::ptrdiff_t>(j + 1));
    }
    return out;
}

}  // namespace

EnvelopeCurve reconstruct(std::span<const Vec2> points, double spacing, ReconstructOptions options)
{
    if (points.size() < 8) throw GeometryError("reconstruct: need at least eight points, got " + std::to_string(points.size()));
    if (!(spacing > 0.0)) throw DomainError("reconstruct: spacing must be positive");

    std::vector<Vec2> poly = prune(points, options.prune_factor * spacing);
    for (int pass = 0;; ++pass) {
        const auto hits = find_self_intersections(poly);
        if (hits.empty()) break;
        if (pass >= options.max_loop_repairs)
            throw TopologyError("reconstruct: envelope self-intersection could not be removed (" +
                                std::to_string(hits.size()) + " crossings left)");
        const auto [i, j] = hits.front();
        const double loop = static_cast<double>(std::min(j - i, poly.size() - (j - i)));
        if (loop > options.max_loop_fraction * static_cast<double>(poly.size()))
            throw TopologyError("reconstruct: self-intersection encloses a loop of " + std::to_string(static_cast<int>(loop)) +
                                " of " + std::to_string(poly.size()) + " nodes");
        poly = prune(cut_loop(poly, i, j), options.prune_factor * spacing);
        if (poly.size() < 4) throw TopologyError("reconstruct: loop removal collapsed the envelope");
    }
    if (poly.size() < 4) throw TopologyError("reconstruct: too few nodes after pruning");

    const EnvelopeCurve fitted(std::move(poly));
    EnvelopeCurve out = fitted.resampled(spacing, options.anchor_tip ? primary_tip_length(fitted) : 0.0);
    if (!out.is_simple()) throw TopologyError("reconstruct: resampled envelope is not simple");
    return out;
}

double primary_tip_length(const EnvelopeCurve& curve)
{
    const auto& sp = curve.spline();
    const std::size_t n = sp.size();
    const std::size_t i = tip_node(curve);
    const double T = sp.period();
    // The extremum lies on one of the two segments meeting at the tip node.
    double lo = sp.knot(i) - (sp.knot(i) - sp.knot((i + n - 1) % n) + (i == 0 ? T : 0.0));
    double hi = sp.knot(i + 1);
    double best = sp.knot(i);
    double best_x = sp.position(best).x();
    constexpr int kSamples = 64;
    for (int k = 0; k <= kSamples; ++k) {
        const double t = lo + (hi - lo) * k / kSamples;
        const double x = sp.position(t).x();
        if (x > best_x) {
            best_x = x;
            best = t;
        }
    }
    const double step = (hi - lo) / kSamples;
    lo = best - step;
    hi = best + step;
    const double g = 0.5 * (std::sqrt(5.0) - 1.0);
    for (int it = 0; it < 60; ++it) {
        const double a = hi - g * (hi - lo), b = lo + g * (hi - lo);
        if (sp.position(a).x() >= sp.position(b).x()) hi = b;
        else lo = a;
    }
    const double t = 0.5 * (lo + hi);
    return sp.position(t).x() >= best_x ? sp.length_at(t) : sp.length_at(best);
}

std::size_t tip_node(const EnvelopeCurve& curve)
{
    const auto nodes = curve.nodes();
    std::size_t best = 0;
    for (std::size_t i = 1; i < nodes.size(); ++i)
        if (nodes[i].x() > nodes[best].x()) best = i;
    return best;
}

double tip_position(const EnvelopeCurve& curve) { return curve.nodes()[tip_node(curve)].x(); }

double hausdorff_distance(std::span<const Vec2> a, std::span<const Vec2> b)
{
    const PolygonLocator la(std::vector<Vec2>(a.begin(), a.end()));
    const PolygonLocator lb(std::vector<Vec2>(b.begin(), b.end()));
    double d = 0.0;
    for (const auto& p : a) d = std::max(d, lb.distance(p));
    for (const auto& p : b) d = std::max(d, la.distance(p));
    return d;
}

}  // namespace gem::envelope
