#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>
#include <vector>

#include "polyknot/fitting.hpp"

using namespace polyknot;
using Catch::Approx;

namespace {

std::vector<std::pair<double, double>> decay_points(double a, double b, double k,
                                                    double l, double n0, int nmin,
                                                    int nmax, int step,
                                                    double noise = 0.0,
                                                    unsigned seed = 0) {
    std::mt19937 gen(seed);
    std::normal_distribution<double> eps(0.0, noise);
    std::vector<std::pair<double, double>> pts;
    for (int n = nmin; n <= nmax; n += step) {
        double p = a * std::pow(n - n0, b) * std::exp(-k * n - l * n * n);
        if (noise > 0) p *= std::exp(eps(gen));
        pts.push_back({static_cast<double>(n), p});
    }
    return pts;
}

}  // namespace

TEST_CASE("decay fit recovers known parameters from clean data") {
    const double a = 0.5, b = 1.2, k = 0.08, l = 1e-4, n0 = 6.0;
    const auto pts = decay_points(a, b, k, l, n0, 8, 88, 4);
    const auto fit = fit_decay(pts);
    REQUIRE(fit.converged);
    REQUIRE(fit.dropped_zero_points == 0);
    for (const auto& [n, p] : pts)
        REQUIRE(fit.evaluate(n) == Approx(p).epsilon(1e-4));
    REQUIRE(fit.k == Approx(k).margin(5e-3));
    REQUIRE(fit.n0 < 8.0);
}

TEST_CASE("decay fit tolerates multiplicative noise") {
    const auto clean = decay_points(0.5, 1.2, 0.08, 1e-4, 6.0, 8, 88, 4);
    const auto noisy = decay_points(0.5, 1.2, 0.08, 1e-4, 6.0, 8, 88, 4, 0.01, 9);
    const auto fit = fit_decay(noisy);
    REQUIRE(fit.converged);
    for (const auto& [n, p] : clean)
        REQUIRE(fit.evaluate(n) == Approx(p).epsilon(0.03));
}

TEST_CASE("decay fit drops non-positive probabilities") {
    auto pts = decay_points(0.5, 1.2, 0.08, 1e-4, 6.0, 8, 88, 4);
    pts.insert(pts.begin(), {7.0, 0.0});
    pts.push_back({92.0, 0.0});
    const auto fit = fit_decay(pts);
    REQUIRE(fit.dropped_zero_points == 2);
    REQUIRE(fit.k == Approx(0.08).margin(5e-3));
}

TEST_CASE("decay fit input validation") {
    REQUIRE_THROWS_AS(fit_decay({{8, 0.1}, {12, 0.05}, {16, 0.02}, {20, 0.01}, {24, 0.005}}),
                      InsufficientData);
    REQUIRE_THROWS_AS(fit_decay({{8, 0.0}, {12, 0.0}, {16, 0.0}, {20, 0.0}, {24, 0.0},
                                 {28, 0.0}, {32, 0.0}}),
                      InsufficientData);
    REQUIRE_THROWS_AS(fit_decay({{8, 0.1}, {8, 0.1}, {16, 0.02}, {20, 0.01}, {24, 0.005},
                                 {28, 0.002}}),
                      InsufficientData);
}

TEST_CASE("natural cubic spline") {
    SECTION("interpolates its knots and is exact on lines") {
        const CubicSpline s({0, 1, 2.5, 4}, {1, 3, 7.5, 12});
        const CubicSpline line({0, 1, 2, 3, 4}, {1, 4, 7, 10, 13});  // y = 3x + 1
        REQUIRE(s(2.5) == Approx(7.5).margin(1e-12));
        for (double t = 0; t <= 4.0; t += 0.1)
            REQUIRE(line(t) == Approx(3 * t + 1).margin(1e-10));
    }
    SECTION("validation") {
        REQUIRE_THROWS_AS(CubicSpline({0.0}, {1.0}), InsufficientData);
        REQUIRE_THROWS_AS(CubicSpline({0, 1, 1}, {1, 2, 3}), DegenerateX);
    }
}

TEST_CASE("scale correspondence recovers a pure shift") {
    // Same decreasing profile sampled at n and at n + 10.
    auto profile = [](double n) { return std::exp(-0.07 * n) * std::pow(n, 0.4); };
    std::vector<std::pair<double, double>> A, B;
    for (int n = 20; n <= 120; n += 2) A.push_back({static_cast<double>(n), profile(n)});
    for (int n = 34; n <= 126; n += 4)
        B.push_back({static_cast<double>(n), profile(n - 10.0)});

    const auto corr = scale_correspondence(A, B);
    REQUIRE(corr.dropped_out_of_range == 0);
    REQUIRE(corr.map.size() == B.size());
    for (const auto& [nb, na] : corr.map) REQUIRE(na == Approx(nb - 10.0).margin(0.1));

    // A shift of zero maps the series onto itself.
    const auto self = scale_correspondence(A, A);
    for (const auto& [nb, na] : self.map) REQUIRE(na == Approx(nb).margin(1e-6));
}

TEST_CASE("scale correspondence drops out-of-range probabilities") {
    std::vector<std::pair<double, double>> A = {{10, 0.8}, {20, 0.4}, {30, 0.2}, {40, 0.1}};
    std::vector<std::pair<double, double>> B = {{5, 0.9}, {12, 0.5}, {50, 0.05}};
    const auto corr = scale_correspondence(A, B);
    REQUIRE(corr.dropped_out_of_range == 2);
    REQUIRE(corr.map.size() == 1);
    REQUIRE(corr.map[0].first == 12.0);
}

TEST_CASE("scale correspondence requires a decreasing reference") {
    REQUIRE_THROWS_AS(
        scale_correspondence({{10, 0.5}, {20, 0.6}, {30, 0.2}}, {{15, 0.4}}),
        NonMonotoneSeries);
    REQUIRE_THROWS_AS(scale_correspondence({{10, 0.5}}, {{15, 0.4}}), InsufficientData);
}

TEST_CASE("linear fit") {
    SECTION("exact line") {
        const auto f = linear_fit({{0, 3}, {1, 5}, {2, 7}, {3, 9}});
        REQUIRE(f.intercept == Approx(3.0).margin(1e-12));
        REQUIRE(f.slope == Approx(2.0).margin(1e-12));
        REQUIRE(f.r_squared == Approx(1.0).margin(1e-12));
    }
    SECTION("symmetric data has zero slope and zero r-squared") {
        const auto f = linear_fit({{-1, 1}, {0, 0}, {1, 1}});
        REQUIRE(f.slope == Approx(0.0).margin(1e-12));
        REQUIRE(f.r_squared == Approx(0.0).margin(1e-12));
    }
    SECTION("affine equivariance") {
        const std::vector<std::pair<double, double>> pts = {
            {1, 2.1}, {2, 2.9}, {3, 4.2}, {4, 4.8}, {5, 6.05}};
        const auto f = linear_fit(pts);
        std::vector<std::pair<double, double>> shifted;
        for (const auto& [x, y] : pts) shifted.push_back({x + 10.0, 2.0 * y - 1.0});
        const auto g = linear_fit(shifted);
        REQUIRE(g.slope == Approx(2.0 * f.slope).margin(1e-10));
        REQUIRE(g.intercept ==
                Approx(2.0 * f.intercept - 1.0 - 10.0 * g.slope).margin(1e-9));
        REQUIRE(g.r_squared == Approx(f.r_squared).margin(1e-12));
    }
    SECTION("constant y is a perfect horizontal fit") {
        const auto f = linear_fit({{0, 4}, {1, 4}, {2, 4}});
        REQUIRE(f.slope == Approx(0.0).margin(1e-12));
        REQUIRE(f.r_squared == 1.0);
    }
    SECTION("degenerate x") {
        REQUIRE_THROWS_AS(linear_fit({{2, 1}, {2, 3}}), DegenerateX);
        REQUIRE_THROWS_AS(linear_fit({{2, 1}}), InsufficientData);
    }
}
