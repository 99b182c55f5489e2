#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "helpers.hpp"
#include "polyknot/thickness.hpp"

using namespace polyknot;
using Catch::Approx;

TEST_CASE("vertex arc radii") {
    const auto sq = regular_ngon(4, 1.0);
    REQUIRE(rad_vertex(sq, 0) == Approx(0.7071068).margin(1e-7));

    const auto nine = regular_ngon(9, 1.0);
    for (int i = 0; i < 9; ++i)
        REQUIRE(rad_vertex(nine, i) == Approx(std::cos(M_PI / 9)).epsilon(1e-12));

    const PolygonalKnot kinked({{0, 0, 0}, {1, 0, 0}, {2, 0, 0}, {1, 1, 0}});
    REQUIRE(rad_vertex(kinked, 1) == kInf);
}

TEST_CASE("minrad") {
    REQUIRE(minrad(regular_ngon(32, 1.0)) == Approx(0.9951847).margin(1e-7));
    REQUIRE(minrad(regular_ngon(4, 1.0)) == Approx(0.7071068).margin(1e-7));

    const auto K = testutil::random_embedded_polygon(10, 3);
    REQUIRE(minrad(scaled(K, 2.5)) == Approx(2.5 * minrad(K)).epsilon(1e-12));
}

TEST_CASE("critical self-distances on symmetric polygons") {
    const auto hex = regular_ngon(6, 1.0);
    const auto sd6 = self_distances(hex);
    REQUIRE(sd6.dcsd == Approx(1.7320508).margin(1e-7));
    REQUIRE(sd6.scsd == Approx(1.7320508).margin(1e-7));
    REQUIRE(sd6.mdcsd == Approx(1.7320508).margin(1e-7));

    const auto sq = self_distances(regular_ngon(4, 1.0));
    REQUIRE(sq.scsd == Approx(1.4142136).margin(1e-7));

    const auto tri = self_distances(regular_ngon(3, 1.0));
    REQUIRE(tri.mdcsd == kInf);
}

TEST_CASE("dcsd below mdcsd") {
    for (int trial = 0; trial < 20; ++trial) {
        const auto K = testutil::random_embedded_polygon(6 + trial, 900 + trial);
        const auto sd = self_distances(K);
        REQUIRE(sd.dcsd <= sd.mdcsd + 1e-12);
    }
}

TEST_CASE("thickness radius and ropelength of regular polygons") {
    for (int n = 3; n <= 128; ++n) {
        const auto K = regular_ngon(n, 1.0);
        REQUIRE(thickness_radius(K) == Approx(std::cos(M_PI / n)).margin(1e-12));
        REQUIRE(ropelength(K) == Approx(2.0 * n * std::tan(M_PI / n)).margin(1e-10));
    }
    const double E9 = 2.0 * std::sin(M_PI / 9);
    REQUIRE(thickness_radius(regular_ngon(9, 1.0)) / E9 == Approx(1.3737).margin(5e-4));
    const double E11 = 2.0 * std::sin(M_PI / 11);
    REQUIRE(thickness_radius(regular_ngon(11, 1.0)) / E11 == Approx(1.7028).margin(5e-4));
    REQUIRE(ropelength(regular_ngon(4, 1.0)) == Approx(8.0).margin(1e-10));
}

TEST_CASE("report invariants and scale equivariance") {
    for (int trial = 0; trial < 10; ++trial) {
        const auto K = testutil::random_embedded_polygon(8 + trial, 40 + trial);
        const auto rep = thickness_report(K);
        const double L = arclength(K);
        REQUIRE(rep.radius == Approx(std::min(rep.minrad, rep.dcsd / 2)).margin(1e-12 * L));
        REQUIRE(rep.radius == Approx(std::min(rep.minrad, rep.scsd / 2)).margin(1e-9 * L));
        REQUIRE(rep.radius == Approx(std::min(rep.minrad, rep.mdcsd / 2)).margin(1e-9 * L));
        REQUIRE(rep.ropelength == Approx(L / rep.radius).epsilon(1e-12));

        const auto rep2 = thickness_report(scaled(K, 3.0));
        REQUIRE(rep2.radius == Approx(3.0 * rep.radius).epsilon(1e-9));
        REQUIRE(rep2.ropelength == Approx(rep.ropelength).epsilon(1e-9));
    }
}

TEST_CASE("self distances match the dense grid oracle") {
    for (int trial = 0; trial < 6; ++trial) {
        const int n = 6 + 2 * trial;
        const auto K = testutil::random_embedded_polygon(n, 500 + trial);
        const auto sd = self_distances(K);
        const auto grid = testutil::grid_self_distance_oracle(K, 256);
        if (sd.dcsd < kInf) REQUIRE(sd.dcsd == Approx(grid.dcsd).margin(1e-3));
        if (sd.scsd < kInf) REQUIRE(sd.scsd == Approx(grid.scsd).margin(1e-3));
    }
}

TEST_CASE("minimum distance corollary and vertex separation") {
    for (int trial = 0; trial < 20; ++trial) {
        const auto K = testutil::random_embedded_polygon(6 + trial, 7000 + trial);
        const double R = thickness_radius(K);
        REQUIRE(md(K) >= std::min(2 * R, min_edge(K)) - 1e-9);
        for (int i = 0; i < K.size(); ++i) {
            const double d = segment_distance(K.edge_start(i), K.edge_end(i),
                                              K.vertex(i + 2), K.vertex(i + 2));
            REQUIRE(d >= std::min(2 * minrad(K), min_edge(K)) - 1e-9);
        }
    }
}

TEST_CASE("total curvature radius cross-check") {
    REQUIRE(tc_radius(regular_ngon(6, 1.0), 64) == Approx(0.8660254).margin(1e-3));

    const auto K = testutil::random_embedded_polygon(16, 12, 0.15);
    const double R = thickness_radius(K);
    REQUIRE(tc_radius(K, 256) >= R - 1e-6);

    REQUIRE(tc_radius(scaled(K, 2.0), 64) == Approx(2.0 * tc_radius(K, 64)).epsilon(1e-12));
}

TEST_CASE("separated pairs with high curvature") {
    // Sampled pairs whose connecting arcs both turn at least pi are at
    // distance at least the thickness diameter.
    for (int trial = 0; trial < 5; ++trial) {
        const auto K = testutil::random_embedded_polygon(10 + trial, 31 + trial, 0.15);
        const double R = thickness_radius(K);
        const int S = 48;
        for (int e = 0; e < K.size(); ++e) {
            for (int s = 0; s < S; ++s) {
                const KnotPoint x{e, static_cast<double>(s) / S};
                for (int f = 0; f < K.size(); ++f) {
                    for (int u = 0; u < S; ++u) {
                        const KnotPoint y{f, static_cast<double>(u) / S};
                        if (e == f && s == u) continue;
                        if (total_curvature(K, x, y) >= M_PI)
                            REQUIRE(distance(K.point_at(x), K.point_at(y)) >= 2 * R - 1e-6);
                    }
                }
            }
        }
    }
}
