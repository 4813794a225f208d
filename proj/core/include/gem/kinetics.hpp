#pragma once

/**
 * @file kinetics.hpp
 * @brief Stagnant-film Ivantsov kinetics for the grain envelope.
 *
 * All quantities are dimensionless: velocities in units of the free-tip
 * speed, lengths in units of the diffusion length of the free tip.
 *
 *   F(Pe)          = sqrt(pi Pe) exp(Pe) erfc(sqrt(Pe))                  (free tip)
 *   u_delta(Pe; f) = sqrt(pi Pe) exp(Pe) [erfc(sqrt(Pe)) - erfc(sqrt(Pe (1 + f Pe)))]
 *   v              = (Pe / Pe_iv)^2                                     (tip selection)
 *
 * `f` is the film argument of the stagnant-film relation. A film of physical
 * thickness delta around a tip of radius R enters as Pe (1 + 2 delta / R);
 * with R = 2 Pe / v and the selection law this is f = delta / Pe_iv^2.
 */

namespace gem::kinetics {

/// Free-tip Ivantsov function F(Pe). Strictly increasing, F(0) = 0, F -> 1.
double ivantsov(double pe);

/// Solves F(Pe_iv) = omega0.
double solve_pe_iv(double omega0, double tol = 1e-14);

/// Stagnant-film concentration difference. Increasing in pe, values in [0, 1).
double u_delta_of_pe(double pe, double film);

struct Inversion {
    double pe = 0.0;
    bool saturated = false;  // u_delta was at or beyond u_delta_of_pe(pe_max)
};

/// Inverse of u_delta_of_pe on [0, pe_max]. Saturates at pe_max instead of throwing.
Inversion pe_of_u_delta(double u_delta, double film, double pe_max = 10.0, double tol = 1e-15);

/// Tip selection criterion v = (pe / pe_iv)^2.
double tip_speed(double pe, double pe_iv);

/// How the physical film thickness maps onto the film argument f.
enum class FilmScaling {
    tip_radius,  // f = delta / Pe_iv^2
    literal,     // f = delta
};

class KineticsParams {
  public:
    KineticsParams(double omega0, double delta, FilmScaling scaling = FilmScaling::tip_radius,
                   double pe_max = 10.0, double tol = 1e-14);

    [[nodiscard]] double omega0() const { return omega0_; }
    [[nodiscard]] double delta() const { return delta_; }
    [[nodiscard]] double pe_iv() const { return pe_iv_; }
    [[nodiscard]] double pe_max() const { return pe_max_; }
    [[nodiscard]] double tol() const { return tol_; }
    [[nodiscard]] FilmScaling scaling() const { return scaling_; }
    [[nodiscard]] double film() const { return film_; }

    /// Tip speed for a probed concentration; clamps u_delta to [0, omega0].
    [[nodiscard]] double speed(double u_delta) const;

  private:
    double omega0_, delta_;
    FilmScaling scaling_;
    double pe_max_, tol_;
    double pe_iv_ = 0.0;
    double film_ = 0.0;
};

}  // namespace gem::kinetics
