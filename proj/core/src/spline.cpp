#include "gem/spline.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "gem/errors.hpp"

namespace gem {

namespace {

// Cyclic tridiagonal solve (Sherman-Morrison on the Thomas algorithm).
// a: sub-diagonal, b: diagonal, c: super-diagonal; a[0] couples to x[n-1]
// and c[n-1] couples to x[0].
std::vector<double> solve_cyclic(std::vector<double> a, std::vector<double> b, std::vector<double> c,
                                 const std::vector<double>& r)
{
    const std::size_t n = b.size();
    const double alpha = c[n - 1];
    const double beta = a[0];
    const double gamma = -b[0];
    b[0] -= gamma;
    b[n - 1] -= alpha * beta / gamma;

    auto thomas = [&](const std::vector<double>& rhs) {
        std::vector<double> cp(n), dp(n), x(n);
        cp[0] = c[0] / b[0];
        dp[0] = rhs[0] / b[0];
        for (std::size_t i = 1; i < n; ++i) {
            const double m = b[i] - a[i] * cp[i - 1];
            cp[i] = c[i] / m;
            dp[i] = (rhs[i] - a[i] * dp[i - 1]) / m;
        }
        x[n - 1] = dp[n - 1];
        for (std::size_t i = n - 1; i-- > 0;) x[i] = dp[i] - cp[i] * x[i + 1];
        return x;
    };

    const auto x = thomas(r);
    std::vector<double> u(n, 0.0);
    u[0] = gamma;
    u[n - 1] = alpha;
    const auto z = thomas(u);
    const double fact = (x[0] + beta * x[n - 1] / gamma) / (1.0 + z[0] + beta * z[n - 1] / gamma);
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i) out[i] = x[i] - fact * z[i];
    return out;
}

// 8-point Gauss-Legendre on [0, 1]
constexpr std::array<double, 8> kGaussX = {0.019855071751231856, 0.10166676129318664, 0.2372337950418355,
                                           0.4082826787521751,   0.5917173212478249,  0.7627662049581645,
                                           0.8983332387068134,   0.9801449282487681};
constexpr std::array<double, 8> kGaussW = {0.05061426814518813, 0.11119051722668724, 0.15685332293894363,
                                           0.18134189168918100, 0.18134189168918100, 0.15685332293894363,
                                           0.11119051722668724, 0.05061426814518813};

}  // namespace

PeriodicSpline::PeriodicSpline(std::span<const Vec2> points) : points_(points.begin(), points.end())
{
    const std::size_t n = points_.size();
    if (n < 3) throw GeometryError("PeriodicSpline: need at least three points");
    knots_.assign(n + 1, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        const double chord = (points_[(i + 1) % n] - points_[i]).norm();
        if (!(chord > 0.0)) throw GeometryError("PeriodicSpline: coincident consecutive points at " + std::to_string(i));
        knots_[i + 1] = knots_[i] + std::sqrt(chord);
    }

    std::vector<double> h(n);
    for (std::size_t i = 0; i < n; ++i) h[i] = knots_[i + 1] - knots_[i];
    std::vector<double> a(n), b(n), c(n), rx(n), ry(n);
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t im = (i + n - 1) % n;
        const std::size_t ip = (i + 1) % n;
        a[i] = h[im];
        b[i] = 2.0 * (h[im] + h[i]);
        c[i] = h[i];
        const Vec2 slope = (points_[ip] - points_[i]) / h[i] - (points_[i] - points_[im]) / h[im];
        rx[i] = 6.0 * slope.x();
        ry[i] = 6.0 * slope.y();
    }
    const auto mx = solve_cyclic(a, b, c, rx);
    const auto my = solve_cyclic(a, b, c, ry);
    second_.resize(n);
    for (std::size_t i = 0; i < n; ++i) second_[i] = Vec2(mx[i], my[i]);

    cumulative_.assign(n + 1, 0.0);
    for (std::size_t i = 0; i < n; ++i) cumulative_[i + 1] = cumulative_[i] + segment_length(i, h[i]);
}

std::size_t PeriodicSpline::segment_of(double& t) const
{
    const double T = period();
    t = std::fmod(t, T);
    if (t < 0.0) t += T;
    auto it = std::upper_bound(knots_.begin(), knots_.end(), t);
    std::size_t seg = static_cast<std::size_t>(std::distance(knots_.begin(), it)) - 1;
    seg = std::min(seg, points_.size() - 1);
    t -= knots_[seg];
    return seg;
}

Vec2 PeriodicSpline::position(double t) const
{
    const std::size_t i = segment_of(t);
    const std::size_t ip = (i + 1) % points_.size();
    const double h = knots_[i + 1] - knots_[i];
    const Vec2 slope = (points_[ip] - points_[i]) / h - h * (2.0 * second_[i] + second_[ip]) / 6.0;
    return points_[i] + t * (slope + t * (0.5 * second_[i] + t * (second_[ip] - second_[i]) / (6.0 * h)));
}

Vec2 PeriodicSpline::derivative(double t) const
{
    const std::size_t i = segment_of(t);
    const std::size_t ip = (i + 1) % points_.size();
    const double h = knots_[i + 1] - knots_[i];
    const Vec2 slope = (points_[ip] - points_[i]) / h - h * (2.0 * second_[i] + second_[ip]) / 6.0;
    return slope + t * (second_[i] + 0.5 * t * (second_[ip] - second_[i]) / h);
}

Vec2 PeriodicSpline::second_derivative(double t) const
{
    const std::size_t i = segment_of(t);
    const std::size_t ip = (i + 1) % points_.size();
    const double h = knots_[i + 1] - knots_[i];
    return second_[i] + t * (second_[ip] - second_[i]) / h;
}

double PeriodicSpline::segment_length(std::size_t seg, double tau) const
{
    // Two Gauss panels per segment keep the arc length accurate near tips.
    double s = 0.0;
    const double t0 = knots_[seg];
    for (int panel = 0; panel < 2; ++panel) {
        const double a = 0.5 * tau * panel;
        for (std::size_t q = 0; q < kGaussX.size(); ++q) {
            const double t = t0 + a + 0.5 * tau * kGaussX[q];
            s += 0.5 * tau * kGaussW[q] * derivative(std::min(t, t0 + tau * (1.0 - 1e-15))).norm();
        }
    }
    return s;
}

double PeriodicSpline::length_at(double t) const
{
    const std::size_t seg = segment_of(t);
    return cumulative_[seg] + segment_length(seg, t);
}

double PeriodicSpline::parameter_at_length(double s) const
{
    const double L = length();
    s = std::fmod(s, L);
    if (s < 0.0) s += L;
    auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), s);
    std::size_t seg = static_cast<std::size_t>(std::distance(cumulative_.begin(), it)) - 1;
    seg = std::min(seg, points_.size() - 1);
    const double target = s - cumulative_[seg];
    const double h = knots_[seg + 1] - knots_[seg];
    const double seg_len = cumulative_[seg + 1] - cumulative_[seg];
    double lo = 0.0, hi = h;
    double tau = h * target / std::max(seg_len, 1e-300);
    for (int it2 = 0; it2 < 50; ++it2) {
        const double f = segment_length(seg, tau) - target;
        if (std::abs(f) <= 1e-13 * std::max(L, 1.0)) break;
        if (f > 0) hi = tau;
        else lo = tau;
        const double speed = derivative(knots_[seg] + tau).norm();
        double next = speed > 0.0 ? tau - f / speed : 0.5 * (lo + hi);
        if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
        tau = next;
    }
    return knots_[seg] + tau;
}

}  // namespace gem
