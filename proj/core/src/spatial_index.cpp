#include "gem/spatial_index.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>

#include "gem/errors.hpp"

namespace gem {

GridIndex::GridIndex(Vec2 lo, Vec2 hi, double cell_size) : lo_(lo), cell_(cell_size)
{
    if (!(cell_size > 0.0)) throw DomainError("GridIndex: cell size must be positive");
    const Vec2 extent = (hi - lo).cwiseMax(Vec2(0.0, 0.0));
    nx_ = std::max(1, static_cast<int>(std::ceil(extent.x() / cell_)) + 1);
    ny_ = std::max(1, static_cast<int>(std::ceil(extent.y() / cell_)) + 1);
    // Very fine cells over large boxes only waste memory; coarsen instead.
    while (static_cast<long long>(nx_) * ny_ > 4'000'000LL) {
        cell_ *= 2.0;
        nx_ = std::max(1, static_cast<int>(std::ceil(extent.x() / cell_)) + 1);
        ny_ = std::max(1, static_cast<int>(std::ceil(extent.y() / cell_)) + 1);
    }
    cells_.assign(static_cast<std::size_t>(nx_) * ny_, {});
}

namespace {

std::pair<Vec2, Vec2> bounds_of(std::span<const Vec2> pts)
{
    if (pts.empty()) return {Vec2(0, 0), Vec2(0, 0)};
    Vec2 lo = pts[0], hi = pts[0];
    for (const auto& p : pts) {
        lo = lo.cwiseMin(p);
        hi = hi.cwiseMax(p);
    }
    return {lo, hi};
}

}  // namespace

GridIndex::GridIndex(std::span<const Vec2> points, double cell_size)
    : GridIndex(bounds_of(points).first, bounds_of(points).second, cell_size)
{
    points_.reserve(points.size());
    for (const auto& p : points) insert(p);
}

std::pair<int, int> GridIndex::cell_of(const Vec2& p) const
{
    const int ix = std::clamp(static_cast<int>(std::floor((p.x() - lo_.x()) / cell_)), 0, nx_ - 1);
    const int iy = std::clamp(static_cast<int>(std::floor((p.y() - lo_.y()) / cell_)), 0, ny_ - 1);
    return {ix, iy};
}

int GridIndex::insert(const Vec2& p)
{
    const int id = static_cast<int>(points_.size());
    points_.push_back(p);
    const auto [ix, iy] = cell_of(p);
    cells_[static_cast<std::size_t>(iy) * nx_ + ix].push_back(id);
    return id;
}

std::vector<int> GridIndex::k_nearest(const Vec2& q, int k) const
{
    if (k <= 0) return {};
    k = std::min<int>(k, static_cast<int>(points_.size()));
    using Entry = std::pair<double, int>;  // (squared distance, index); max-heap on both
    std::priority_queue<Entry> heap;
    const auto [qx, qy] = cell_of(q);

    // Points in rings beyond `ring` are at least ring * cell away from the
    // query clamped into the box, hence at least that far from the query.
    const int max_ring = std::max(nx_, ny_);
    for (int ring = 0; ring <= max_ring; ++ring) {
        for (int iy = qy - ring; iy <= qy + ring; ++iy) {
            if (iy < 0 || iy >= ny_) continue;
            const bool full_row = (iy == qy - ring || iy == qy + ring);
            const int step = (full_row || ring == 0) ? 1 : 2 * ring;
            for (int ix = qx - ring; ix <= qx + ring; ix += step) {
                if (ix < 0 || ix >= nx_) continue;
                for (int id : cells_[static_cast<std::size_t>(iy) * nx_ + ix]) {
                    const Entry e{(points_[static_cast<std::size_t>(id)] - q).squaredNorm(), id};
                    if (static_cast<int>(heap.size()) < k) {
                        heap.push(e);
                    } else if (e < heap.top()) {
                        heap.pop();
                        heap.push(e);
                    }
                }
            }
        }
        if (static_cast<int>(heap.size()) == k) {
            if (std::sqrt(heap.top().first) < ring * cell_) break;
        }
    }
    std::vector<int> out(heap.size());
    for (auto i = static_cast<int>(heap.size()) - 1; i >= 0; --i) {
        out[static_cast<std::size_t>(i)] = heap.top().second;
        heap.pop();
    }
    return out;
}

int GridIndex::nearest(const Vec2& q) const
{
    const auto r = k_nearest(q, 1);
    return r.empty() ? -1 : r.front();
}

bool GridIndex::any_within(const Vec2& q, double radius) const
{
    const double r2 = radius * radius;
    const auto [x0, y0] = cell_of(q - Vec2(radius, radius));
    const auto [x1, y1] = cell_of(q + Vec2(radius, radius));
    for (int iy = y0; iy <= y1; ++iy)
        for (int ix = x0; ix <= x1; ++ix)
            for (int id : cells_[static_cast<std::size_t>(iy) * nx_ + ix])
                if ((points_[static_cast<std::size_t>(id)] - q).squaredNorm() < r2) return true;
    return false;
}

}  // namespace gem
