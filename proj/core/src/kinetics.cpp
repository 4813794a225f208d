#include "gem/kinetics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "gem/errors.hpp"

namespace gem::kinetics {

namespace {

constexpr double kTinyPe = 1e-8;

// erfc(a) - erfc(b) for 0 <= a <= b. Near zero the erf form keeps the small
// difference free of cancellation against the leading 1.
double erfc_gap(double a, double b)
{
    if (a < 1.0) return std::erf(b) - std::erf(a);
    return std::erfc(a) - std::erfc(b);
}

// Root of g(x) = target on [lo, hi] for increasing g. Secant steps are kept
// only while they stay strictly inside the bracket; otherwise bisect.
template <class G>
double bracketed_root(G&& g, double target, double lo, double hi, double tol)
{
    double flo = g(lo) - target;
    double fhi = g(hi) - target;
    if (flo >= 0.0) return lo;
    if (fhi <= 0.0) return hi;
    double x = 0.5 * (lo + hi);
    bool use_secant = true;
    for (int it = 0; it < 400; ++it) {
        if (use_secant) {
            x = lo - flo * (hi - lo) / (fhi - flo);
            if (!(x > lo && x < hi)) x = 0.5 * (lo + hi);
        } else {
            x = 0.5 * (lo + hi);
        }
        const double fx = g(x) - target;
        if (std::abs(fx) <= tol && hi - lo <= 1e-12 * std::max(std::abs(x), 1e-300)) return x;
        if (fx == 0.0) return x;
        const double old_width = hi - lo;
        if (fx < 0.0) {
            lo = x;
            flo = fx;
        } else {
            hi = x;
            fhi = fx;
        }
        // Fall back to bisection whenever a secant step fails to halve the bracket.
        use_secant = (hi - lo) < 0.5 * old_width;
        if (hi - lo <= 4.0 * std::numeric_limits<double>::epsilon() * std::abs(x)) break;
    }
    return x;
}

}  // namespace

double ivantsov(double pe)
{
    if (pe < 0.0) throw DomainError("ivantsov: Peclet number must be nonnegative");
    if (pe < kTinyPe) return std::sqrt(std::numbers::pi * pe);
    const double s = std::sqrt(pe);
    return std::sqrt(std::numbers::pi * pe) * std::exp(pe) * std::erfc(s);
}

double solve_pe_iv(double omega0, double tol)
{
    if (!(omega0 > 0.0 && omega0 < 1.0))
        throw DomainError("solve_pe_iv: supersaturation must lie in (0, 1), got " + std::to_string(omega0));
    double hi = 1.0;
    while (ivantsov(hi) < omega0) {
        hi *= 2.0;
        // exp(Pe) overflows shortly after Pe ~ 700
        if (hi > 512.0) throw ConvergenceError("solve_pe_iv: could not bracket the free-tip Peclet number");
    }
    return bracketed_root(ivantsov, omega0, 0.0, hi, tol);
}

double u_delta_of_pe(double pe, double film)
{
    if (pe < 0.0) throw DomainError("u_delta_of_pe: Peclet number must be nonnegative");
    if (!(film > 0.0)) throw DomainError("u_delta_of_pe: film thickness must be positive");
    if (pe < kTinyPe) return 0.0;
    const double a = std::sqrt(pe);
    const double b = std::sqrt(pe * (1.0 + film * pe));
    return std::sqrt(std::numbers::pi * pe) * std::exp(pe) * erfc_gap(a, b);
}

Inversion pe_of_u_delta(double u_delta, double film, double pe_max, double tol)
{
    if (u_delta < 0.0) throw DomainError("pe_of_u_delta: concentration difference must be nonnegative");
    if (u_delta == 0.0) return {0.0, false};
    const auto g = [film](double pe) { return u_delta_of_pe(pe, film); };
    if (u_delta >= g(pe_max)) return {pe_max, true};
    return {bracketed_root(g, u_delta, 0.0, pe_max, tol), false};
}

double tip_speed(double pe, double pe_iv)
{
    if (pe < 0.0) throw DomainError("tip_speed: Peclet number must be nonnegative");
    if (!(pe_iv > 0.0)) throw DomainError("tip_speed: free-tip Peclet number must be positive");
    const double r = pe / pe_iv;
    return r * r;
}

KineticsParams::KineticsParams(double omega0, double delta, FilmScaling scaling, double pe_max, double tol)
    : omega0_(omega0), delta_(delta), scaling_(scaling), pe_max_(pe_max), tol_(tol)
{
    if (!(delta > 0.0)) throw DomainError("KineticsParams: film thickness must be positive");
    pe_iv_ = solve_pe_iv(omega0, tol);
    if (!(pe_iv_ < pe_max_)) throw DomainError("KineticsParams: pe_max must exceed the free-tip Peclet number");
    film_ = scaling_ == FilmScaling::tip_radius ? delta_ / (pe_iv_ * pe_iv_) : delta_;
}

double KineticsParams::speed(double u_delta) const
{
    const double u = std::clamp(u_delta, 0.0, omega0_);
    return tip_speed(pe_of_u_delta(u, film_, pe_max_, 1e-3 * tol_).pe, pe_iv_);
}

}  // namespace gem::kinetics
