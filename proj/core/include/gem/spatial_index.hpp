#pragma once

#include <span>
#include <utility>
#include <vector>

#include "gem/geometry.hpp"

namespace gem {

/// Uniform bucket grid over a fixed bounding box. Stored points must lie in
/// the box; query points may lie anywhere. Supports incremental insertion,
/// which the advancing-front fill relies on.
class GridIndex {
  public:
    GridIndex(Vec2 lo, Vec2 hi, double cell_size);
    /// Builds over the bounding box of `points` and inserts them in order.
    GridIndex(std::span<const Vec2> points, double cell_size);

    int insert(const Vec2& p);
    [[nodiscard]] std::size_t size() const { return points_.size(); }
    [[nodiscard]] const Vec2& point(int i) const { return points_[static_cast<std::size_t>(i)]; }

    /// The k nearest stored points, sorted by distance; ties by ascending index.
    [[nodiscard]] std::vector<int> k_nearest(const Vec2& q, int k) const;

    /// Index of the nearest stored point, -1 when empty.
    [[nodiscard]] int nearest(const Vec2& q) const;

    [[nodiscard]] bool any_within(const Vec2& q, double radius) const;

    template <class F>
    void for_each_within(const Vec2& q, double radius, F&& f) const
    {
        const double r2 = radius * radius;
        const auto [x0, y0] = cell_of(q - Vec2(radius, radius));
        const auto [x1, y1] = cell_of(q + Vec2(radius, radius));
        for (int iy = y0; iy <= y1; ++iy)
            for (int ix = x0; ix <= x1; ++ix)
                for (int id : cells_[static_cast<std::size_t>(iy) * nx_ + ix]) {
                    const double d2 = (points_[static_cast<std::size_t>(id)] - q).squaredNorm();
                    if (d2 <= r2) f(id, d2);
                }
    }

  private:
    [[nodiscard]] std::pair<int, int> cell_of(const Vec2& p) const;

    Vec2 lo_;
    double cell_;
    int nx_, ny_;
    std::vector<std::vector<int>> cells_;
    std::vector<Vec2> points_;
};

}  // namespace gem
