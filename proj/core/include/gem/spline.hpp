#pragma once

#include <span>
#include <vector>

#include "gem/geometry.hpp"

namespace gem {

/// Closed interpolating cubic spline through an ordered point loop, C2 at
/// every knot including the seam. Knots use centripetal spacing
/// (square root of chord length).
class PeriodicSpline {
  public:
    PeriodicSpline() = default;
    explicit PeriodicSpline(std::span<const Vec2> points);

    [[nodiscard]] std::size_t size() const { return points_.size(); }
    [[nodiscard]] double period() const { return knots_.back(); }
    [[nodiscard]] double knot(std::size_t i) const { return knots_[i]; }

    [[nodiscard]] Vec2 position(double t) const;
    [[nodiscard]] Vec2 derivative(double t) const;
    [[nodiscard]] Vec2 second_derivative(double t) const;

    [[nodiscard]] double length() const { return cumulative_.back(); }
    /// Arc length from parameter 0 to the start of segment i.
    [[nodiscard]] double length_to_knot(std::size_t i) const { return cumulative_[i]; }
    /// Arc length from parameter 0 to t, t taken modulo the period.
    [[nodiscard]] double length_at(double t) const;
    /// Parameter at which the arc length measured from t = 0 equals s.
    [[nodiscard]] double parameter_at_length(double s) const;

  private:
    [[nodiscard]] std::size_t segment_of(double& t) const;
    [[nodiscard]] double segment_length(std::size_t seg, double tau) const;

    std::vector<Vec2> points_;
    std::vector<double> knots_;       // size + 1 entries, knots_[0] = 0
    std::vector<Vec2> second_;        // second derivatives at knots
    std::vector<double> cumulative_;  // size + 1 entries
};

}  // namespace gem
