#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "polyknot/rng.hpp"
#include "polyknot/thresholds.hpp"

using namespace polyknot;
using Catch::Approx;

TEST_CASE("coalescence thresholds of the regular 32-gon") {
    const double E = 2.0 * std::sin(M_PI / 32), R = std::cos(M_PI / 32);
    REQUIRE(coalesce_threshold(E, R, 4) == Approx(0.2903).margin(5e-4));
    REQUIRE(coalesce_threshold(E, R, 5) == Approx(0.3827).margin(5e-4));
    REQUIRE(coalesce_threshold(E, R, 6) == Approx(0.4714).margin(5e-4));
}

TEST_CASE("coalescence threshold of the regular 9-gon") {
    const double E = 2.0 * std::sin(M_PI / 9), R = std::cos(M_PI / 9);
    REQUIRE(coalesce_threshold(E, R, 4) == Approx(0.8660).margin(5e-4));
}

TEST_CASE("osculating and rational closed forms agree") {
    CounterRng rng(21, 0);
    for (int trial = 0; trial < 1000; ++trial) {
        const double R = rng.uniform(0.2, 3.0);
        const double E = rng.uniform(0.01, 1.0) * 2.0 * R * 0.999;
        for (int k : {4, 5, 6})
            REQUIRE(coalesce_threshold(E, R, k) ==
                    Approx(coalesce_threshold_closed_form(E, R, k)).margin(1e-12 * R));
    }
}

TEST_CASE("threshold domain errors") {
    REQUIRE_THROWS_AS(coalesce_threshold(2.0, 1.0, 4), DomainError);
    REQUIRE_THROWS_AS(coalesce_threshold(0.5, 1.0, 3), DomainError);
    REQUIRE_THROWS_AS(coalesce_threshold(0.5, 1.0, 7), DomainError);
}

TEST_CASE("regular n-gon closed forms") {
    for (int n = 7; n <= 128; ++n) {
        const double E = 2.0 * std::sin(M_PI / n), R = std::cos(M_PI / n);
        for (int k : {4, 5, 6})
            REQUIRE(coalesce_threshold(E, R, k) ==
                    Approx(std::sin((k - 1) * M_PI / n)).margin(1e-12));
    }
    const auto r9 = regular_ngon_report(9);
    REQUIRE(r9.t4 == Approx(0.8660).margin(5e-4));
    REQUIRE(r9.radius == Approx(0.9396926).margin(1e-6));
    REQUIRE(r9.t4 < r9.radius);

    const auto r11 = regular_ngon_report(11);
    REQUIRE(r11.t5 / r11.edge == Approx(1.6144).margin(5e-4));
    REQUIRE(r11.radius / r11.edge == Approx(1.7028).margin(5e-4));

    // Boundary case: at eight edges the four-vertex gate meets the radius.
    const auto r8 = regular_ngon_report(8);
    REQUIRE(r8.t4 == Approx(r8.radius).margin(1e-12));
}

TEST_CASE("threshold scaling") {
    const double E = 0.3, R = 1.1;
    for (int k : {4, 5, 6})
        REQUIRE(coalesce_threshold(3 * E, 3 * R, k) ==
                Approx(3 * coalesce_threshold(E, R, k)).epsilon(1e-12));
}

TEST_CASE("band structure") {
    for (int n : {9, 16, 32, 64}) {
        const auto rep = regular_ngon_report(n);
        REQUIRE(rep.t4 < rep.t5);
        // sin((k-1)*pi/n) peaks at a quarter turn: for n = 9 the 5- and
        // 6-vertex thresholds are symmetric about it and coincide.
        REQUIRE(rep.t5 <= rep.t6 + 1e-12);
        REQUIRE(rep.equivalence_radius == Approx(std::min(rep.t4, rep.radius)).margin(1e-12));
        REQUIRE(rep.trefoil_band_lo <= rep.trefoil_band_hi);
        REQUIRE(rep.tref_fig8_band_lo <= rep.tref_fig8_band_hi);
        REQUIRE(rep.trefoil_band_hi <= rep.tref_fig8_band_hi + 1e-12);
        REQUIRE(rep.tref_fig8_band_hi <= rep.radius + 1e-12);
    }
}

TEST_CASE("schur minimum distance") {
    REQUIRE(schur_min_distance(0.7, 0.5, 2) == Approx(0.7).epsilon(1e-12));

    const int n = 16;
    const double E = 2.0 * std::sin(M_PI / n);
    REQUIRE(schur_min_distance(E, 2 * M_PI / n, 4) ==
            Approx(2.0 * std::sin(3 * M_PI / n)).margin(1e-12));

    REQUIRE(schur_min_distance(0.5, 1e-9, 5) == Approx(4 * 0.5).margin(1e-6));

    // Nonincreasing in the angle bound, nondecreasing in the vertex count.
    double prev = kInf;
    for (double th : {0.1, 0.2, 0.4, 0.8}) {
        const double d = schur_min_distance(0.5, th, 4);
        REQUIRE(d <= prev + 1e-12);
        prev = d;
    }
    prev = 0.0;
    for (int k = 2; k <= 6; ++k) {
        const double d = schur_min_distance(0.5, 0.4, k);
        REQUIRE(d >= prev - 1e-12);
        prev = d;
    }

    REQUIRE_THROWS_AS(schur_min_distance(0.5, 2.0, 6), DomainError);
}

TEST_CASE("perturbation regime classification") {
    const auto K = regular_ngon(32, 1.0);
    REQUIRE(classify_radius(K, 0.2) == PerturbationRegime::Equivalent);
    REQUIRE(classify_radius(K, 0.34) == PerturbationRegime::TrefoilOnly);
    REQUIRE(classify_radius(K, 0.40) == PerturbationRegime::TrefoilFig8);
    REQUIRE(classify_radius(K, 0.50) == PerturbationRegime::ComplexLocal);
    REQUIRE(classify_radius(K, 1.1) == PerturbationRegime::BeyondTube);

    auto pts = K.vertices();
    pts[0].x += 0.05;
    REQUIRE_THROWS_AS(classify_radius(PolygonalKnot(pts), 0.2), NotEquilateral);
}
