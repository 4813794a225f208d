#pragma once

#include <array>
#include <span>
#include <vector>

#include "gem/geometry.hpp"
#include "gem/spline.hpp"

namespace gem::envelope {

/// Closed, simple, counter-clockwise grain envelope: an ordered node loop and
/// the periodic cubic spline through it. Normals point into the liquid.
class EnvelopeCurve {
  public:
    EnvelopeCurve() = default;
    /// Reverses the loop (keeping node 0 first) when given clockwise.
    explicit EnvelopeCurve(std::vector<Vec2> nodes);

    /// Circle sampled with round(2 pi r / h) nodes (at least 8), node 0 on +x.
    static EnvelopeCurve circle(const Vec2& center, double radius, double spacing);

    [[nodiscard]] std::span<const Vec2> nodes() const { return nodes_; }
    [[nodiscard]] std::size_t size() const { return nodes_.size(); }
    [[nodiscard]] const PeriodicSpline& spline() const { return spline_; }
    [[nodiscard]] double arc_length() const { return spline_.length(); }
    [[nodiscard]] double area() const;

    [[nodiscard]] const Vec2& normal(std::size_t i) const { return normals_[i]; }
    [[nodiscard]] std::span<const Vec2> normals() const { return normals_; }

    /// Inside the grain (polygon through the nodes).
    [[nodiscard]] bool contains(const Vec2& p) const { return locator_.contains(p); }
    /// Distance to the node polygon.
    [[nodiscard]] double distance(const Vec2& p) const { return locator_.distance(p); }

    [[nodiscard]] bool is_simple() const;
    /// True when consecutive node gaps are within `rel_tol` of `spacing`.
    [[nodiscard]] bool is_uniform(double spacing, double rel_tol = 0.05) const;
    /// Nodes resampled at uniform arc length, count round(L / spacing),
    /// starting `start` arc length past node 0.
    [[nodiscard]] EnvelopeCurve resampled(double spacing, double start = 0.0) const;

  private:
    std::vector<Vec2> nodes_;
    PeriodicSpline spline_;
    std::vector<Vec2> normals_;
    PolygonLocator locator_;
};

/// The four <10> growth directions.
inline constexpr std::array<std::array<double, 2>, 4> kGrowthDirections = {{{1, 0}, {-1, 0}, {0, 1}, {0, -1}}};

/// Unit normal at node i from the spline tangent, oriented into the liquid.
Vec2 outward_normal(const EnvelopeCurve& curve, std::size_t node);

/// Cosine of the smallest angle between `normal` and the growth directions,
/// i.e. max(|nx|, |ny|). Throws DomainError for non-unit input.
double growth_cosine(const Vec2& normal);

/// x_i + cos(theta_i) v_i dt n_i for every node, order preserved.
std::vector<Vec2> advect_nodes(const EnvelopeCurve& curve, std::span<const double> speeds, double dt);

struct ReconstructOptions {
    double prune_factor = 0.5;  // drop nodes closer than this times h along the loop
    int max_loop_repairs = 16;
    /// Loops holding more than this fraction of the nodes are a topology
    /// change, not an advection artefact, and abort the reconstruction.
    double max_loop_fraction = 0.25;
    /// Start the resampling at the largest-x point of the spline, so that a
    /// node always sits on the primary tip instead of sliding past it.
    bool anchor_tip = true;
};

/// Arc length from node 0 to the largest-x point of the spline.
double primary_tip_length(const EnvelopeCurve& curve);

/// Prunes near duplicates, cuts self-intersection loops, fits a periodic
/// spline and resamples it at uniform arc length close to `spacing`.
EnvelopeCurve reconstruct(std::span<const Vec2> points, double spacing, ReconstructOptions options = {});

/// Largest node x-coordinate: the primary (+x) tip.
double tip_position(const EnvelopeCurve& curve);
/// Index of the node attaining tip_position.
std::size_t tip_node(const EnvelopeCurve& curve);

/// Symmetric Hausdorff distance between two closed polylines.
double hausdorff_distance(std::span<const Vec2> a, std::span<const Vec2> b);

}  // namespace gem::envelope
