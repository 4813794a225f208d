#include "gem/reference.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>
#include <unordered_map>

#include "gem/errors.hpp"

namespace gem::reference {

namespace {

int mirror(int i, int n)
{
    // Reflection about the boundary nodes 0 and n-1: node -k equals node k.
    while (i < 0 || i >= n) {
        if (i < 0) i = -i;
        if (i >= n) i = 2 * (n - 1) - i;
    }
    return i;
}

struct Access {
    const PhaseGrid& g;
    std::span<const double> f;
    double operator()(int i, int j) const { return f[g.at(mirror(i, g.n), mirror(j, g.n))]; }
};

// Fourth-order central first difference along one axis, times 12 h.
template <class F>
double d1(F&& f)
{
    return -f(2) + 8.0 * f(1) - 8.0 * f(-1) + f(-2);
}

double signed_offset(double alpha, double w)
{
    // Signed distance from the alpha = 0.5 level along the liquid-facing
    // normal for the equilibrium tanh profile.
    const double a = std::clamp(alpha, 1e-12, 1.0 - 1e-12);
    return 2.0 * w * std::atanh(1.0 - 2.0 * a);
}

PhaseGrid blank(const GridOptions& o)
{
    if (!(o.a_m > 0.0) || !(o.h_g > 0.0) || !(o.dt > 0.0)) throw DomainError("PhaseGrid: a_m, h_g and dt must be positive");
    if (!(o.w_factor > 0.0)) throw DomainError("PhaseGrid: interface width must be positive");
    PhaseGrid g;
    g.n = static_cast<int>(std::lround(o.a_m / o.h_g)) + 1;
    if (g.n < 5) throw DomainError("PhaseGrid: fewer than five nodes per side");
    g.h = o.a_m / (g.n - 1);
    g.lo = -0.5 * o.a_m;
    g.w_alpha = o.w_factor * g.h;
    g.b = o.b > 0.0 ? o.b : g.w_alpha * g.w_alpha / o.dt * 1e-2;
    g.eps_g = 1e-8 / g.h;
    g.extension = o.extension;
    g.alpha.assign(static_cast<std::size_t>(g.n) * static_cast<std::size_t>(g.n), 0.0);
    g.u.assign(g.alpha.size(), o.omega0);
    return g;
}

void hold_grain(PhaseGrid& g)
{
    for (std::size_t k = 0; k < g.size(); ++k)
        if (g.alpha[k] >= kGrainLevel) g.u[k] = 0.0;
}

}  // namespace

PhaseGrid make_grid(const GridOptions& o)
{
    PhaseGrid g = blank(o);
    if (!(o.r_d > 0.0) || o.r_d >= 0.5 * o.a_m) throw DomainError("PhaseGrid: r_d must lie in (0, a_m/2)");
    const double r0 = o.r_d - signed_offset(kGrainLevel, g.w_alpha);
    for (int j = 0; j < g.n; ++j)
        for (int i = 0; i < g.n; ++i) {
            const double r = std::hypot(g.coord(i), g.coord(j));
            g.alpha[g.at(i, j)] = 0.5 * (1.0 - std::tanh((r - r0) / (2.0 * g.w_alpha)));
        }
    hold_grain(g);
    return g;
}

PhaseGrid make_planar_grid(const GridOptions& o, double x0)
{
    PhaseGrid g = blank(o);
    for (int j = 0; j < g.n; ++j)
        for (int i = 0; i < g.n; ++i) g.alpha[g.at(i, j)] = 0.5 * (1.0 - std::tanh((g.coord(i) - x0) / (2.0 * g.w_alpha)));
    hold_grain(g);
    return g;
}

double stable_dt(const PhaseGrid& g, double max_speed)
{
    const double h2 = g.h * g.h;
    double bound = 0.25 * h2;
    if (g.b > 0.0) bound = std::min(bound, 1.0 / (g.b * (32.0 / (3.0 * h2) + 1.0 / (g.w_alpha * g.w_alpha))));
    if (max_speed > 0.0) bound = std::min(bound, 0.5 * g.h / max_speed);
    return bound;
}

PhaseGrid phase_step(const PhaseGrid& g, std::span<const double> v_n, double dt)
{
    if (v_n.size() != g.size()) throw AlignmentError("phase_step: speed field does not match the grid");
    double vmax = 0.0;
    for (double v : v_n) vmax = std::max(vmax, std::abs(v));
    if (!(dt > 0.0) || dt > stable_dt(g, vmax))
        throw StabilityError("phase_step: dt = " + std::to_string(dt) + " exceeds the explicit bound " +
                             std::to_string(stable_dt(g, vmax)));

    PhaseGrid out = g;
    const Access a{g, g.alpha};
    const double inv12h = 1.0 / (12.0 * g.h);
    const double inv12h2 = 1.0 / (12.0 * g.h * g.h);
    const double inv144h2 = 1.0 / (144.0 * g.h * g.h);
    const double w2 = g.w_alpha * g.w_alpha;
    const double eps2 = g.eps_g * g.eps_g;
    for (int j = 0; j < g.n; ++j)
        for (int i = 0; i < g.n; ++i) {
            const double c = a(i, j);
            const double ax = d1([&](int k) { return a(i + k, j); }) * inv12h;
            const double ay = d1([&](int k) { return a(i, j + k); }) * inv12h;
            const double axx = (-a(i + 2, j) + 16.0 * a(i + 1, j) - 30.0 * c + 16.0 * a(i - 1, j) - a(i - 2, j)) * inv12h2;
            const double ayy = (-a(i, j + 2) + 16.0 * a(i, j + 1) - 30.0 * c + 16.0 * a(i, j - 1) - a(i, j - 2)) * inv12h2;
            const double axy = d1([&](int k) { return d1([&](int l) { return a(i + k, j + l); }); }) * inv144h2;
            const double g2 = ax * ax + ay * ay;
            // lap(a) - |grad a| div(grad a / |grad a|) is the second derivative
            // along the gradient direction.
            const double ann = (ax * ax * axx + 2.0 * ax * ay * axy + ay * ay * ayy) / (g2 + eps2);
            const double react = c * (1.0 - c) * (1.0 - 2.0 * c) / w2;
            const std::size_t k = g.at(i, j);
            // n = -grad a / |grad a|, so v_n n.grad(a) = -v_n |grad a|.
            const double next = c + dt * (v_n[k] * std::sqrt(g2) + g.b * (ann - react));
            out.alpha[k] = std::clamp(next, 0.0, 1.0);
        }
    hold_grain(out);
    return out;
}

PhaseGrid diffuse_step_grid(const PhaseGrid& g, double dt)
{
    if (!(dt > 0.0) || dt > 0.25 * g.h * g.h)
        throw StabilityError("diffuse_step_grid: dt = " + std::to_string(dt) + " exceeds h^2/4");
    PhaseGrid out = g;
    std::vector<double> u = g.u;
    for (std::size_t k = 0; k < g.size(); ++k)
        if (g.alpha[k] >= kGrainLevel) u[k] = 0.0;
    const Access f{g, u};
    const double r = dt / (g.h * g.h);
    for (int j = 0; j < g.n; ++j)
        for (int i = 0; i < g.n; ++i) {
            const std::size_t k = g.at(i, j);
            if (g.alpha[k] >= kGrainLevel) {
                out.u[k] = 0.0;
                continue;
            }
            const double lap = f(i + 1, j) + f(i - 1, j) + f(i, j + 1) + f(i, j - 1) - 4.0 * u[k];
            out.u[k] = u[k] + r * lap;
        }
    return out;
}

double sample_bilinear(const PhaseGrid& g, std::span<const double> field, const Vec2& p)
{
    const double hi = g.coord(g.n - 1);
    auto fold = [&](double x) {
        const double span = hi - g.lo;
        double s = std::fmod(x - g.lo, 2.0 * span);
        if (s < 0.0) s += 2.0 * span;
        return s > span ? 2.0 * span - s : s;
    };
    const double sx = fold(p.x()) / g.h, sy = fold(p.y()) / g.h;
    const int i = std::min(static_cast<int>(std::floor(sx)), g.n - 2);
    const int j = std::min(static_cast<int>(std::floor(sy)), g.n - 2);
    const double fx = sx - i, fy = sy - j;
    return (1 - fx) * (1 - fy) * field[g.at(i, j)] + fx * (1 - fy) * field[g.at(i + 1, j)] +
           (1 - fx) * fy * field[g.at(i, j + 1)] + fx * fy * field[g.at(i + 1, j + 1)];
}

std::vector<double> envelope_speed_on_grid(const PhaseGrid& g, const kinetics::KineticsParams& kin)
{
    std::vector<double> v(g.size(), 0.0);
    std::vector<std::uint8_t> set(g.size(), 0);
    const Access a{g, g.alpha};
    const double s95 = signed_offset(kGrainLevel, g.w_alpha);
    const double inv2h = 0.5 / g.h;
    for (int j = 0; j < g.n; ++j)
        for (int i = 0; i < g.n; ++i) {
            const std::size_t k = g.at(i, j);
            const double c = g.alpha[k];
            if (!(c > kBandLow && c < kGrainLevel)) continue;
            const Vec2 grad((a(i + 1, j) - a(i - 1, j)) * inv2h, (a(i, j + 1) - a(i, j - 1)) * inv2h);
            const double norm = grad.norm();
            if (!(norm > 1e-12)) continue;
            const Vec2 n = -grad / norm;
            const Vec2 x(g.coord(i), g.coord(j));
            const Vec2 contour = x - (signed_offset(c, g.w_alpha) - s95) * n;
            const Vec2 probe = contour + kin.delta() * n;
            const double u = std::clamp(sample_bilinear(g, g.u, probe), 0.0, kin.omega0());
            v[k] = kin.speed(u) * std::max(std::abs(n.x()), std::abs(n.y()));
            set[k] = 1;
        }

    // Extension: each layer takes the mean of already assigned 4-neighbours.
    for (int layer = 0; layer < g.extension; ++layer) {
        std::vector<std::pair<std::size_t, double>> fresh;
        for (int j = 0; j < g.n; ++j)
            for (int i = 0; i < g.n; ++i) {
                const std::size_t k = g.at(i, j);
                if (set[k]) continue;
                double sum = 0.0;
                int count = 0;
                const std::array<std::pair<int, int>, 4> nb = {{{i + 1, j}, {i, j + 1}, {i - 1, j}, {i, j - 1}}};
                for (const auto& [p, q] : nb) {
                    if (p < 0 || q < 0 || p >= g.n || q >= g.n) continue;
                    const std::size_t m = g.at(p, q);
                    if (set[m]) {
                        sum += v[m];
                        ++count;
                    }
                }
                if (count > 0) fresh.emplace_back(k, sum / count);
            }
        if (fresh.empty()) break;
        for (const auto& [k, val] : fresh) {
            v[k] = val;
            set[k] = 1;
        }
    }
    return v;
}

std::optional<double> tip_position_grid(const PhaseGrid& g)
{
    auto row_tip = [&](int j) -> std::optional<double> {
        for (int i = g.n - 1; i >= 0; --i) {
            const double c = g.alpha[g.at(i, j)];
            if (c < kGrainLevel) continue;
            if (i == g.n - 1) return std::nullopt;
            const double d = g.alpha[g.at(i + 1, j)];
            return g.coord(i) + (c - kGrainLevel) / (c - d) * g.h;
        }
        return std::nullopt;
    };
    if (g.n % 2 == 1) return row_tip(g.n / 2);
    const auto lo = row_tip(g.n / 2 - 1), hi = row_tip(g.n / 2);
    if (!lo || !hi) return std::nullopt;
    return 0.5 * (*lo + *hi);
}

std::vector<Vec2> alpha_contour(const PhaseGrid& g, double level)
{
    // Edge ids: 2 * node for the edge to the right neighbour, 2 * node + 1 for
    // the edge to the upper neighbour.
    auto node = [&](int i, int j) { return static_cast<long>(g.at(i, j)); };
    std::unordered_map<long, Vec2> points;
    std::unordered_map<long, std::vector<long>> links;
    auto crossing = [&](int i0, int j0, int i1, int j1) {
        const double a0 = g.alpha[g.at(i0, j0)], a1 = g.alpha[g.at(i1, j1)];
        const double t = (level - a0) / (a1 - a0);
        return Vec2(g.coord(i0) + t * (i1 - i0) * g.h, g.coord(j0) + t * (j1 - j0) * g.h);
    };
    for (int j = 0; j + 1 < g.n; ++j)
        for (int i = 0; i + 1 < g.n; ++i) {
            const std::array<double, 4> c = {g.alpha[g.at(i, j)], g.alpha[g.at(i + 1, j)], g.alpha[g.at(i + 1, j + 1)],
                                             g.alpha[g.at(i, j + 1)]};
            int mask = 0;
            for (int k = 0; k < 4; ++k)
                if (c[static_cast<std::size_t>(k)] >= level) mask |= 1 << k;
            if (mask == 0 || mask == 15) continue;
            // Cell edges: bottom, right, top, left.
            const std::array<long, 4> id = {2 * node(i, j), 2 * node(i + 1, j) + 1, 2 * node(i, j + 1), 2 * node(i, j) + 1};
            const std::array<std::array<int, 4>, 4> ends = {{{i, j, i + 1, j},
                                                             {i + 1, j, i + 1, j + 1},
                                                             {i, j + 1, i + 1, j + 1},
                                                             {i, j, i, j + 1}}};
            std::vector<int> cut;
            for (int e = 0; e < 4; ++e) {
                const bool in0 = (mask >> e) & 1, in1 = (mask >> ((e + 1) % 4)) & 1;
                if (in0 != in1) {
                    cut.push_back(e);
                    const auto& q = ends[static_cast<std::size_t>(e)];
                    points.emplace(id[static_cast<std::size_t>(e)], crossing(q[0], q[1], q[2], q[3]));
                }
            }
            auto link = [&](int e0, int e1) {
                links[id[static_cast<std::size_t>(e0)]].push_back(id[static_cast<std::size_t>(e1)]);
                links[id[static_cast<std::size_t>(e1)]].push_back(id[static_cast<std::size_t>(e0)]);
            };
            if (cut.size() == 2) {
                link(cut[0], cut[1]);
            } else {
                // Saddle: resolve with the cell-center average.
                const double mid = 0.25 * (c[0] + c[1] + c[2] + c[3]);
                const bool center_in = mid >= level;
                const bool corner0_in = mask & 1;
                if (center_in == corner0_in) {
                    link(0, 1);
                    link(2, 3);
                } else {
                    link(0, 3);
                    link(1, 2);
                }
            }
        }

    std::vector<long> keys;
    keys.reserve(points.size());
    for (const auto& [k, p] : points) keys.push_back(k);
    std::sort(keys.begin(), keys.end());
    std::unordered_map<long, bool> used;
    std::vector<Vec2> best;
    for (long start : keys) {
        if (used[start]) continue;
        // Walk to one end first so open chains are traversed whole.
        long head = start, prev = -1;
        for (;;) {
            const auto& nb = links[head];
            long next = -1;
            for (long c : nb)
                if (c != prev) {
                    next = c;
                    break;
                }
            if (nb.size() < 2 || next == -1 || next == start) break;
            prev = head;
            head = next;
        }
        std::vector<Vec2> chain;
        prev = -1;
        long cur = head;
        while (cur != -1 && !used[cur]) {
            used[cur] = true;
            chain.push_back(points[cur]);
            long next = -1;
            for (long c : links[cur])
                if (c != prev && !used[c]) {
                    next = c;
                    break;
                }
            prev = cur;
            cur = next;
        }
        if (chain.size() > best.size()) best = std::move(chain);
    }
    return best;
}

}  // namespace gem::reference
