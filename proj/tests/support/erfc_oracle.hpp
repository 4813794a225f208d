#pragma once

// Extended-precision error-function oracle, independent of <cmath> erf/erfc:
// an all-positive power series for erf and a Lentz continued fraction for
// erfc at large arguments, both in long double.

#include <cmath>

namespace gem::testing {

inline long double oracle_pi() { return 3.141592653589793238462643383279502884L; }

// erf(x) = 2/sqrt(pi) e^{-x^2} sum_n 2^n x^{2n+1} / (1 3 5 ... (2n+1))
inline long double erf_series(long double x)
{
    long double term = x, sum = x;
    const long double x2 = x * x;
    for (int n = 1; n < 2000; ++n) {
        term *= 2.0L * x2 / (2.0L * n + 1.0L);
        sum += term;
        if (term < 1e-22L * sum) break;
    }
    return 2.0L / std::sqrt(oracle_pi()) * std::exp(-x2) * sum;
}

// erfc(x) = e^{-x^2}/sqrt(pi) * 1/(x + (1/2)/(x + 1/(x + (3/2)/(x + ...))))
inline long double erfc_continued_fraction(long double x)
{
    const long double tiny = 1e-300L;
    long double f = x, c = x, d = 0.0L;
    for (int k = 1; k < 5000; ++k) {
        const long double a = 0.5L * k;
        d = x + a * d;
        if (std::fabs(d) < tiny) d = tiny;
        c = x + a / c;
        if (std::fabs(c) < tiny) c = tiny;
        d = 1.0L / d;
        const long double delta = c * d;
        f *= delta;
        if (std::fabs(delta - 1.0L) < 1e-21L) break;
    }
    return std::exp(-x * x) / std::sqrt(oracle_pi()) / f;
}

inline long double erfc_oracle(long double x)
{
    if (x >= 2.5L) return erfc_continued_fraction(x);
    return 1.0L - erf_series(x);
}

inline long double erf_oracle(long double x)
{
    if (x >= 2.5L) return 1.0L - erfc_continued_fraction(x);
    return erf_series(x);
}

// erfc(a) - erfc(b), 0 <= a <= b
inline long double erfc_gap_oracle(long double a, long double b)
{
    if (a < 1.0L) return erf_oracle(b) - erf_oracle(a);
    return erfc_oracle(a) - erfc_oracle(b);
}

inline long double u_delta_oracle(long double pe, long double film)
{
    if (pe == 0.0L) return 0.0L;
    const long double a = std::sqrt(pe);
    const long double b = std::sqrt(pe * (1.0L + film * pe));
    return std::sqrt(oracle_pi() * pe) * std::exp(pe) * erfc_gap_oracle(a, b);
}

inline long double ivantsov_oracle(long double pe)
{
    return std::sqrt(oracle_pi() * pe) * std::exp(pe) * erfc_oracle(std::sqrt(pe));
}

// Plain bisection on the free-tip equation.
inline long double pe_iv_oracle(long double omega0)
{
    long double lo = 0.0L, hi = 10.0L;
    for (int i = 0; i < 200; ++i) {
        const long double mid = 0.5L * (lo + hi);
        (ivantsov_oracle(mid) < omega0 ? lo : hi) = mid;
    }
    return 0.5L * (lo + hi);
}

// Plain bisection on the stagnant-film relation.
inline long double pe_of_u_delta_oracle(long double u, long double film, long double pe_max = 10.0L)
{
    long double lo = 0.0L, hi = pe_max;
    for (int i = 0; i < 200; ++i) {
        const long double mid = 0.5L * (lo + hi);
        (u_delta_oracle(mid, film) < u ? lo : hi) = mid;
    }
    return 0.5L * (lo + hi);
}

}  // namespace gem::testing
