#pragma once

#include <optional>
#include <span>
#include <vector>

#include "gem/geometry.hpp"
#include "gem/kinetics.hpp"

namespace gem::reference {

/// Fixed-grid diffuse-interface state: indicator alpha (1 in the grain) and
/// concentration u on the nodes of a uniform grid over [-a/2, a/2]^2.
struct PhaseGrid {
    int n = 0;           // nodes per side
    double h = 0.0;      // grid spacing
    double lo = 0.0;     // coordinate of node 0 on both axes
    double w_alpha = 0.0;
    double b = 0.0;
    double eps_g = 0.0;  // gradient regularization of the curvature term
    int extension = 4;   // velocity extension band, in cells
    std::vector<double> alpha;
    std::vector<double> u;

    [[nodiscard]] double coord(int i) const { return lo + i * h; }
    [[nodiscard]] std::size_t at(int i, int j) const
    {
        return static_cast<std::size_t>(j) * static_cast<std::size_t>(n) + static_cast<std::size_t>(i);
    }
    [[nodiscard]] std::size_t size() const { return alpha.size(); }
};

/// Grain interior threshold and interface band limits.
inline constexpr double kGrainLevel = 0.95;
inline constexpr double kBandLow = 0.05;

struct GridOptions {
    double a_m = 20.0;
    double h_g = 0.05;
    double r_d = 0.22;
    double omega0 = 0.18;
    double w_factor = 1.5;  // w_alpha = w_factor * h_g
    double b = 0.0;         // <= 0: w_alpha^2 / dt * 1e-2
    double dt = 1e-4;
    int extension = 4;
};

/// Circular grain whose alpha = 0.95 contour sits at r_d, tanh profile of
/// width w_alpha, u = omega0 in the liquid and 0 in the grain.
PhaseGrid make_grid(const GridOptions& options);

/// Planar profile 0.5 (1 - tanh((x - x0) / (2 w_alpha))) along x.
PhaseGrid make_planar_grid(const GridOptions& options, double x0);

/// Explicit update of alpha under the relaxation form
///   da/dt + v_n n.grad(a) = b [lap(a) - a(1-a)(1-2a)/w^2 - |grad a| div(grad a / |grad a|)]
/// with fourth-order central differences, clamped to [0, 1].
PhaseGrid phase_step(const PhaseGrid& grid, std::span<const double> v_n, double dt);

/// Five-point forward Euler for u in cells with alpha < 0.95; grain cells
/// are held at 0 and the walls are zero-flux through mirrored ghosts.
PhaseGrid diffuse_step_grid(const PhaseGrid& grid, double dt);

/// Normal speed in the interface band, extended over `extension` cells.
/// u is probed at distance delta outside the estimated alpha = 0.95 contour.
std::vector<double> envelope_speed_on_grid(const PhaseGrid& grid, const kinetics::KineticsParams& kinetics);

/// Rightmost alpha = 0.95 crossing on the y = 0 row; nullopt once the grain
/// reaches the wall.
std::optional<double> tip_position_grid(const PhaseGrid& grid);

/// Bilinear interpolation of a nodal field; points outside are mirrored.
double sample_bilinear(const PhaseGrid& grid, std::span<const double> field, const Vec2& p);

/// Longest polyline of the `level` contour of alpha (marching squares).
std::vector<Vec2> alpha_contour(const PhaseGrid& grid, double level = kGrainLevel);

/// Largest dt admitted by the explicit phase and diffusion updates.
double stable_dt(const PhaseGrid& grid, double max_speed);

}  // namespace gem::reference
