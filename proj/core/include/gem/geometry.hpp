#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Core>

namespace gem {

using Vec2 = Eigen::Vector2d;

inline double cross(const Vec2& a, const Vec2& b) { return a.x() * b.y() - a.y() * b.x(); }

/// Rotates by +90 degrees (counter-clockwise).
inline Vec2 perp(const Vec2& v) { return {-v.y(), v.x()}; }

double point_segment_distance(const Vec2& p, const Vec2& a, const Vec2& b);

/// True when the closed segments [a0,a1] and [b0,b1] intersect properly or touch.
bool segments_intersect(const Vec2& a0, const Vec2& a1, const Vec2& b0, const Vec2& b1);

/// Shoelace area of a closed polygon; positive for counter-clockwise order.
double signed_area(std::span<const Vec2> polygon);

/// Even-odd containment test without acceleration; reference implementation.
bool polygon_contains(std::span<const Vec2> polygon, const Vec2& p);

/// Pairs (i, j), i < j, of non-adjacent polygon edges that intersect. Edge i
/// runs from vertex i to vertex i+1 (mod size).
std::vector<std::pair<std::size_t, std::size_t>> find_self_intersections(
    std::span<const Vec2> polygon);

/// Accelerated containment and distance queries against a fixed closed polygon.
/// Edges are bucketed into a uniform grid for distance queries and into
/// horizontal strips for the crossing-number test.
class PolygonLocator {
  public:
    PolygonLocator() = default;
    explicit PolygonLocator(std::vector<Vec2> polygon);

    [[nodiscard]] bool contains(const Vec2& p) const;
    [[nodiscard]] double distance(const Vec2& p) const;
    [[nodiscard]] std::span<const Vec2> vertices() const { return polygon_; }
    [[nodiscard]] bool empty() const { return polygon_.empty(); }

  private:
    std::vector<Vec2> polygon_;
    Vec2 lo_{0, 0}, hi_{0, 0};
    double cell_ = 1.0;
    int nx_ = 0, ny_ = 0;
    std::vector<std::vector<int>> cells_;   // edge ids per distance cell
    double strip_h_ = 1.0;
    std::vector<std::vector<int>> strips_;  // edge ids per horizontal strip
};

}  // namespace gem
