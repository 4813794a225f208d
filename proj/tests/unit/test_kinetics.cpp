#include <doctest.h>

#include <cmath>
#include <limits>

#include "erfc_oracle.hpp"
#include "gem/errors.hpp"
#include "gem/kinetics.hpp"

using namespace gem::kinetics;
using gem::testing::ivantsov_oracle;
using gem::testing::pe_iv_oracle;
using gem::testing::pe_of_u_delta_oracle;
using gem::testing::u_delta_oracle;

namespace {
// Reference values from a 40-digit mpmath evaluation.
constexpr double kPeIv018 = 0.01324820057020998240;
constexpr double kUDeltaAtPeIvFilm1 = 1.749219892474023028e-4;
constexpr double kPeOfU018Film1 = 0.47029639463244679527;
}  // namespace

TEST_CASE("oracle agrees with high-precision reference values")
{
    CHECK(static_cast<double>(pe_iv_oracle(0.18L)) == doctest::Approx(kPeIv018).epsilon(1e-14));
    CHECK(static_cast<double>(u_delta_oracle(1e-4L, 1.0L)) == doctest::Approx(9.999749962500885544e-9).epsilon(1e-12));
    CHECK(static_cast<double>(u_delta_oracle(5.0L, 0.5L)) == doctest::Approx(0.9207832050944385138).epsilon(1e-14));
    CHECK(static_cast<double>(u_delta_oracle(1.0L, 2.0L)) == doctest::Approx(0.6889460176141890696).epsilon(1e-14));
}

TEST_CASE("solve_pe_iv")
{
    SUBCASE("reference supersaturation 0.18")
    {
        const double pe = solve_pe_iv(0.18);
        CHECK(pe == doctest::Approx(kPeIv018).epsilon(1e-12));
        CHECK(pe == doctest::Approx(0.0133).epsilon(0.01));
    }
    SUBCASE("round trip")
    {
        for (double w : {0.05, 0.18, 0.5}) {
            const double pe = solve_pe_iv(w);
            CHECK(std::abs(ivantsov(pe) - w) <= 1e-14);
            CHECK(std::abs(static_cast<double>(ivantsov_oracle(pe)) - w) <= 1e-13);
        }
    }
    SUBCASE("vanishing supersaturation")
    {
        CHECK(solve_pe_iv(1e-9) < 1e-15);
        CHECK(solve_pe_iv(1e-6) < solve_pe_iv(1e-5));
    }
    SUBCASE("domain errors")
    {
        CHECK_THROWS_AS(solve_pe_iv(0.0), gem::DomainError);
        CHECK_THROWS_AS(solve_pe_iv(1.0), gem::DomainError);
        CHECK_THROWS_AS(solve_pe_iv(-0.2), gem::DomainError);
    }
    SUBCASE("bracket failure near saturation")
    {
        CHECK_THROWS_AS(solve_pe_iv(1.0 - 1e-6), gem::ConvergenceError);
    }
}

TEST_CASE("u_delta_of_pe")
{
    CHECK(u_delta_of_pe(0.0, 1.0) == 0.0);
    CHECK(u_delta_of_pe(1e-9, 1.0) == 0.0);
    CHECK(u_delta_of_pe(kPeIv018, 1.0) == doctest::Approx(kUDeltaAtPeIvFilm1).epsilon(1e-11));
    CHECK(u_delta_of_pe(0.0133, 1.0) == doctest::Approx(1.762901445235217098e-4).epsilon(1e-11));
    // An infinitely thick film is the full Ivantsov relation.
    CHECK(u_delta_of_pe(0.3, 1e12) == doctest::Approx(ivantsov(0.3)).epsilon(1e-12));
    CHECK_THROWS_AS(u_delta_of_pe(-1e-3, 1.0), gem::DomainError);
    CHECK_THROWS_AS(u_delta_of_pe(0.1, 0.0), gem::DomainError);

    SUBCASE("monotone in Peclet number")
    {
        for (double film : {0.5, 1.0, 2.0}) {
            double prev = u_delta_of_pe(0.0, film);
            for (int k = 1; k <= 2000; ++k) {
                const double pe = 5.0 * k / 2000.0;
                const double u = u_delta_of_pe(pe, film);
                CHECK(u > prev);
                CHECK(u < 1.0);
                prev = u;
            }
        }
    }
    SUBCASE("relative error against the long double oracle")
    {
        double worst = 0.0;
        for (double film : {0.5, 1.0, 2.0})
            for (int k = 0; k <= 400; ++k) {
                const double pe = 1e-4 * std::pow(5.0 / 1e-4, k / 400.0);
                const double ref = static_cast<double>(u_delta_oracle(pe, film));
                worst = std::max(worst, std::abs(u_delta_of_pe(pe, film) - ref) / ref);
            }
        CHECK(worst <= 1e-10);
    }
}

TEST_CASE("pe_of_u_delta")
{
    CHECK(pe_of_u_delta(0.0, 1.0).pe == 0.0);
    CHECK(pe_of_u_delta(u_delta_of_pe(kPeIv018, 1.0), 1.0).pe == doctest::Approx(kPeIv018).epsilon(1e-9));
    CHECK(pe_of_u_delta(0.18, 1.0).pe == doctest::Approx(kPeOfU018Film1).epsilon(1e-10));
    CHECK(pe_of_u_delta(0.18, 1.0).pe ==
          doctest::Approx(static_cast<double>(pe_of_u_delta_oracle(0.18L, 1.0L))).epsilon(1e-10));
    CHECK_THROWS_AS(pe_of_u_delta(-0.1, 1.0), gem::DomainError);

    SUBCASE("saturation clamps at the bracket end")
    {
        const auto r = pe_of_u_delta(0.999, 1.0, 10.0);
        CHECK(r.saturated);
        CHECK(r.pe == 10.0);
        CHECK_FALSE(pe_of_u_delta(0.5, 1.0, 10.0).saturated);
    }
    SUBCASE("inverse consistency")
    {
        for (double film : {0.5, 1.0, 2.0, 5697.5})
            for (int k = 0; k <= 60; ++k) {
                const double pe = 1e-4 * std::pow(5.0 / 1e-4, k / 60.0);
                const double back = pe_of_u_delta(u_delta_of_pe(pe, film), film).pe;
                CHECK(std::abs(back - pe) <= 1e-8 * std::max(1.0, pe));
            }
    }
}

TEST_CASE("tip_speed")
{
    CHECK(tip_speed(kPeIv018, kPeIv018) == 1.0);
    CHECK(tip_speed(0.0, kPeIv018) == 0.0);
    CHECK(tip_speed(2.0 * kPeIv018, kPeIv018) == doctest::Approx(4.0).epsilon(1e-15));
    CHECK_THROWS_AS(tip_speed(-1.0, 0.1), gem::DomainError);
    CHECK_THROWS_AS(tip_speed(1.0, 0.0), gem::DomainError);
}

TEST_CASE("KineticsParams")
{
    const KineticsParams k(0.18, 1.0);
    CHECK(k.pe_iv() == doctest::Approx(kPeIv018).epsilon(1e-12));
    CHECK(std::abs(ivantsov(k.pe_iv()) - 0.18) <= k.tol());
    CHECK(k.pe_iv() < k.pe_max());
    CHECK(k.film() == doctest::Approx(1.0 / (kPeIv018 * kPeIv018)).epsilon(1e-12));

    SUBCASE("free-tip fixed point")
    {
        for (double delta : {0.5, 1.0, 2.0}) {
            const KineticsParams kk(0.18, delta);
            const double u = u_delta_of_pe(kk.pe_iv(), kk.film());
            CHECK(kk.speed(u) == doctest::Approx(1.0).epsilon(1e-6));
        }
    }
    SUBCASE("homogeneous melt drives the tip faster than the free tip")
    {
        // 40-digit reference: Pe = 0.016458409001064562 for u_delta = 0.18.
        CHECK(k.speed(0.18) == doctest::Approx(1.5433410659859497).epsilon(1e-9));
        CHECK(k.speed(0.0) == 0.0);
        CHECK(k.speed(0.5) == k.speed(0.18));  // clamped to omega0
        CHECK(k.speed(-0.1) == 0.0);
    }
    SUBCASE("literal film scaling")
    {
        const KineticsParams lit(0.18, 1.0, FilmScaling::literal);
        CHECK(lit.film() == 1.0);
        CHECK(lit.speed(kUDeltaAtPeIvFilm1) == doctest::Approx(1.0).epsilon(1e-6));
    }
    CHECK_THROWS_AS(KineticsParams(0.18, 0.0), gem::DomainError);
}
