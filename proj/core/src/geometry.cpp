#include "gem/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

namespace gem {

double point_segment_distance(const Vec2& p, const Vec2& a, const Vec2& b)
{
    const Vec2 ab = b - a;
    const double len2 = ab.squaredNorm();
    double t = len2 > 0.0 ? (p - a).dot(ab) / len2 : 0.0;
    t = std::clamp(t, 0.0, 1.0);
    return (p - (a + t * ab)).norm();
}

namespace {

int orientation_sign(const Vec2& a, const Vec2& b, const Vec2& c)
{
    const double v = cross(b - a, c - a);
    const double scale = (b - a).norm() * (c - a).norm();
    if (std::abs(v) <= 1e-14 * scale) return 0;
    return v > 0 ? 1 : -1;
}

bool on_segment(const Vec2& a, const Vec2& b, const Vec2& p)
{
    return std::min(a.x(), b.x()) <= p.x() && p.x() <= std::max(a.x(), b.x()) &&
           std::min(a.y(), b.y()) <= p.y() && p.y() <= std::max(a.y(), b.y());
}

}  // namespace

bool segments_intersect(const Vec2& a0, const Vec2& a1, const Vec2& b0, const Vec2& b1)
{
    const int o1 = orientation_sign(a0, a1, b0);
    const int o2 = orientation_sign(a0, a1, b1);
    const int o3 = orientation_sign(b0, b1, a0);
    const int o4 = orientation_sign(b0, b1, a1);
    if (o1 != o2 && o3 != o4) return true;
    if (o1 == 0 && on_segment(a0, a1, b0)) return true;
    if (o2 == 0 && on_segment(a0, a1, b1)) return true;
    if (o3 == 0 && on_segment(b0, b1, a0)) return true;
    if (o4 == 0 && on_segment(b0, b1, a1)) return true;
    return false;
}

double signed_area(std::span<const Vec2> polygon)
{
    double a = 0.0;
    const std::size_t n = polygon.size();
    for (std::size_t i = 0; i < n; ++i) a += cross(polygon[i], polygon[(i + 1) % n]);
    return 0.5 * a;
}

bool polygon_contains(std::span<const Vec2> polygon, const Vec2& p)
{
    bool inside = false;
    const std::size_t n = polygon.size();
    for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
        const Vec2& a = polygon[i];
        const Vec2& b = polygon[j];
        if ((a.y() > p.y()) != (b.y() > p.y())) {
            const double x = a.x() + (p.y() - a.y()) * (b.x() - a.x()) / (b.y() - a.y());
            if (p.x() < x) inside = !inside;
        }
    }
    return inside;
}

std::vector<std::pair<std::size_t, std::size_t>> find_self_intersections(
    std::span<const Vec2> polygon)
{
    std::vector<std::pair<std::size_t, std::size_t>> hits;
    const std::size_t n = polygon.size();
    if (n < 4) return hits;

    Vec2 lo = polygon[0], hi = polygon[0];
    double mean_edge = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        lo = lo.cwiseMin(polygon[i]);
        hi = hi.cwiseMax(polygon[i]);
        mean_edge += (polygon[(i + 1) % n] - polygon[i]).norm();
    }
    mean_edge /= static_cast<double>(n);
    const double extent = std::max((hi - lo).maxCoeff(), 1e-300);
    const int cells = std::clamp(static_cast<int>(extent / std::max(2.0 * mean_edge, 1e-300)), 1, 256);
    const double cell = extent / cells * (1.0 + 1e-12);

    std::vector<std::vector<std::size_t>> grid(static_cast<std::size_t>(cells) * cells);
    auto index = [&](double v, double origin) {
        return std::clamp(static_cast<int>((v - origin) / cell), 0, cells - 1);
    };
    for (std::size_t e = 0; e < n; ++e) {
        const Vec2& a = polygon[e];
        const Vec2& b = polygon[(e + 1) % n];
        const int x0 = index(std::min(a.x(), b.x()), lo.x()), x1 = index(std::max(a.x(), b.x()), lo.x());
        const int y0 = index(std::min(a.y(), b.y()), lo.y()), y1 = index(std::max(a.y(), b.y()), lo.y());
        for (int iy = y0; iy <= y1; ++iy)
            for (int ix = x0; ix <= x1; ++ix) grid[static_cast<std::size_t>(iy) * cells + ix].push_back(e);
    }

    std::set<std::pair<std::size_t, std::size_t>> seen;
    for (const auto& bucket : grid) {
        for (std::size_t u = 0; u < bucket.size(); ++u) {
            for (std::size_t v = u + 1; v < bucket.size(); ++v) {
                std::size_t i = std::min(bucket[u], bucket[v]);
                std::size_t j = std::max(bucket[u], bucket[v]);
                if (j == i + 1 || (i == 0 && j == n - 1)) continue;
                if (!seen.insert({i, j}).second) continue;
                if (segments_intersect(polygon[i], polygon[(i + 1) % n], polygon[j], polygon[(j + 1) % n]))
                    hits.emplace_back(i, j);
            }
        }
    }
    std::sort(hits.begin(), hits.end());
    return hits;
}

PolygonLocator::PolygonLocator(std::vector<Vec2> polygon) : polygon_(std::move(polygon))
{
    const std::size_t n = polygon_.size();
    if (n == 0) return;
    lo_ = hi_ = polygon_[0];
    double mean_edge = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        lo_ = lo_.cwiseMin(polygon_[i]);
        hi_ = hi_.cwiseMax(polygon_[i]);
        mean_edge += (polygon_[(i + 1) % n] - polygon_[i]).norm();
    }
    mean_edge /= static_cast<double>(n);
    const Vec2 extent = (hi_ - lo_).cwiseMax(Vec2(1e-12, 1e-12));

    cell_ = std::max({2.0 * mean_edge, extent.maxCoeff() / 64.0, 1e-12});
    nx_ = std::max(1, static_cast<int>(std::ceil(extent.x() / cell_)));
    ny_ = std::max(1, static_cast<int>(std::ceil(extent.y() / cell_)));
    cells_.assign(static_cast<std::size_t>(nx_) * ny_, {});

    const int nstrips = std::clamp(static_cast<int>(n / 4), 1, 512);
    strip_h_ = extent.y() / nstrips;
    strips_.assign(static_cast<std::size_t>(nstrips), {});

    auto cx = [&](double x) { return std::clamp(static_cast<int>((x - lo_.x()) / cell_), 0, nx_ - 1); };
    auto cy = [&](double y) { return std::clamp(static_cast<int>((y - lo_.y()) / cell_), 0, ny_ - 1); };
    auto sy = [&](double y) { return std::clamp(static_cast<int>((y - lo_.y()) / strip_h_), 0, nstrips - 1); };

    for (std::size_t e = 0; e < n; ++e) {
        const Vec2& a = polygon_[e];
        const Vec2& b = polygon_[(e + 1) % n];
        for (int iy = cy(std::min(a.y(), b.y())); iy <= cy(std::max(a.y(), b.y())); ++iy)
            for (int ix = cx(std::min(a.x(), b.x())); ix <= cx(std::max(a.x(), b.x())); ++ix)
                cells_[static_cast<std::size_t>(iy) * nx_ + ix].push_back(static_cast<int>(e));
        for (int s = sy(std::min(a.y(), b.y())); s <= sy(std::max(a.y(), b.y())); ++s)
            strips_[static_cast<std::size_t>(s)].push_back(static_cast<int>(e));
    }
}

bool PolygonLocator::contains(const Vec2& p) const
{
    if (polygon_.empty()) return false;
    if (p.x() < lo_.x() || p.x() > hi_.x() || p.y() < lo_.y() || p.y() > hi_.y()) return false;
    const int nstrips = static_cast<int>(strips_.size());
    const int s = std::clamp(static_cast<int>((p.y() - lo_.y()) / strip_h_), 0, nstrips - 1);
    const std::size_t n = polygon_.size();
    bool inside = false;
    for (int e : strips_[static_cast<std::size_t>(s)]) {
        const Vec2& a = polygon_[static_cast<std::size_t>(e)];
        const Vec2& b = polygon_[(static_cast<std::size_t>(e) + 1) % n];
        if ((a.y() > p.y()) != (b.y() > p.y())) {
            const double x = a.x() + (p.y() - a.y()) * (b.x() - a.x()) / (b.y() - a.y());
            if (p.x() < x) inside = !inside;
        }
    }
    return inside;
}

double PolygonLocator::distance(const Vec2& p) const
{
    if (polygon_.empty()) return std::numeric_limits<double>::infinity();
    const std::size_t n = polygon_.size();
    const Vec2 q = p.cwiseMax(lo_).cwiseMin(hi_);
    const int qx = std::clamp(static_cast<int>((q.x() - lo_.x()) / cell_), 0, nx_ - 1);
    const int qy = std::clamp(static_cast<int>((q.y() - lo_.y()) / cell_), 0, ny_ - 1);

    double best = std::numeric_limits<double>::infinity();
    const int max_ring = std::max(nx_, ny_);
    for (int k = 0; k <= max_ring; ++k) {
        for (int iy = qy - k; iy <= qy + k; ++iy) {
            if (iy < 0 || iy >= ny_) continue;
            const bool edge_row = (iy == qy - k || iy == qy + k);
            for (int ix = qx - k; ix <= qx + k; ix += (edge_row ? 1 : 2 * k)) {
                if (ix >= 0 && ix < nx_) {
                    for (int e : cells_[static_cast<std::size_t>(iy) * nx_ + ix]) {
                        const Vec2& a = polygon_[static_cast<std::size_t>(e)];
                        const Vec2& b = polygon_[(static_cast<std::size_t>(e) + 1) % n];
                        best = std::min(best, point_segment_distance(p, a, b));
                    }
                }
                if (k == 0) break;
            }
        }
        // Cells in ring k+1 and beyond lie at least k cells from the projected point.
        if (best <= k * cell_) break;
    }
    return best;
}

}  // namespace gem
