#pragma once

#include <cmath>
#include <numbers>
#include <string>

#include "polyknot/polygon.hpp"
#include "polyknot/thickness.hpp"

namespace polyknot {

// Minimum perturbation radius at which k consecutive vertices of an
// equilateral knot with edge length E and thickness radius R can coalesce
// in a small ball.  k = 4 gates local trefoils, k = 5 figure-eights,
// k = 6 more complex summands.
//
// Computed on the osculating circle through consecutive vertices: the
// circumradius is rho = sqrt(R^2 + E^2/4), a single edge subtends theta with
// sin(theta/2) = E/(2 rho), and the threshold is half the chord over k-1
// edges, rho*sin((k-1) theta/2).
inline double coalesce_threshold(double E, double R, int k) {
    if (!(E > 0.0) || !(R > 0.0) || E >= 2.0 * R)
        throw DomainError("coalesce_threshold requires 0 < E < 2R");
    if (k < 4 || k > 6) throw DomainError("coalesce_threshold requires k in {4,5,6}");
    const double rho = std::sqrt(R * R + E * E / 4.0);
    const double half_theta = std::asin(E / (2.0 * rho));
    return rho * std::sin((k - 1) * half_theta);
}

// The same thresholds in rational closed form; kept as an independent
// cross-check of the osculating-circle route.
inline double coalesce_threshold_closed_form(double E, double R, int k) {
    if (!(E > 0.0) || !(R > 0.0) || E >= 2.0 * R)
        throw DomainError("coalesce_threshold requires 0 < E < 2R");
    const double R2 = R * R, E2 = E * E;
    const double denom = 4.0 * R2 + E2;
    switch (k) {
        case 4:
            return 0.5 * E * (12.0 * R2 - E2) / denom;
        case 5:
            return 4.0 * E * R * (4.0 * R2 - E2) / std::pow(denom, 1.5);
        case 6:
            return 0.5 * E * (80.0 * R2 * R2 - 40.0 * R2 * E2 + E2 * E2) / (denom * denom);
        default:
            throw DomainError("coalesce_threshold requires k in {4,5,6}");
    }
}

// Schur lower bound: distance between the endpoints of a planar (k-1)-edge
// equilateral arc with constant turning angle theta_max.  Any arc with the
// same edge length and turning angles <= theta_max has endpoints at least
// this far apart.
inline double schur_min_distance(double E, double theta_max, int k) {
    if (!(E > 0.0)) throw DomainError("schur_min_distance requires E > 0");
    if (k < 2) throw DomainError("schur_min_distance requires k >= 2");
    if (!(theta_max >= 0.0) || theta_max >= std::numbers::pi)
        throw DomainError("schur_min_distance requires theta_max in [0, pi)");
    if ((k - 1) * theta_max >= 2.0 * std::numbers::pi)
        throw DomainError("schur_min_distance: arc wraps past a full turn");
    if (theta_max == 0.0) return (k - 1) * E;
    const double rho = E / (2.0 * std::sin(theta_max / 2.0));
    return 2.0 * rho * std::sin((k - 1) * theta_max / 2.0);
}

struct ThresholdReport {
    double edge = 0.0;    // common edge length E
    double radius = 0.0;  // R(K)
    double t4 = 0.0, t5 = 0.0, t6 = 0.0;
    double equivalence_radius = 0.0;
    double trefoil_band_lo = 0.0, trefoil_band_hi = 0.0;
    double tref_fig8_band_lo = 0.0, tref_fig8_band_hi = 0.0;
};

namespace detail {

// Band endpoints use cumulative maxima of the thresholds: coalescing k
// vertices in a ball in particular coalesces k-1 of them, so the effective
// gate for k is at least the gate for k-1 even where the raw chord formula
// is non-monotone (very coarse polygons).
inline void fill_bands(ThresholdReport& rep) {
    const double R = rep.radius;
    const double g4 = rep.t4;
    const double g5 = std::max(g4, rep.t5);
    const double g6 = std::max(g5, rep.t6);
    rep.equivalence_radius = std::min(g4, R);
    rep.trefoil_band_lo = std::min(g4, R);
    rep.trefoil_band_hi = std::min(g5, R);
    rep.tref_fig8_band_lo = std::min(g5, R);
    rep.tref_fig8_band_hi = std::min(g6, R);
}

}  // namespace detail

inline ThresholdReport threshold_report(double E, double R) {
    ThresholdReport rep;
    rep.edge = E;
    rep.radius = R;
    rep.t4 = coalesce_threshold(E, R, 4);
    rep.t5 = coalesce_threshold(E, R, 5);
    rep.t6 = coalesce_threshold(E, R, 6);
    detail::fill_bands(rep);
    return rep;
}

inline ThresholdReport regular_ngon_report(int n) {
    if (n < 3) throw DomainError("regular_ngon_report requires n >= 3");
    const double E = 2.0 * std::sin(std::numbers::pi / n);
    const double R = std::cos(std::numbers::pi / n);
    // Specialized closed forms sin((k-1)pi/n); these extend to n <= 4 where
    // the general E < 2R precondition fails.
    ThresholdReport rep;
    rep.edge = E;
    rep.radius = R;
    rep.t4 = std::sin(3.0 * std::numbers::pi / n);
    rep.t5 = std::sin(4.0 * std::numbers::pi / n);
    rep.t6 = std::sin(5.0 * std::numbers::pi / n);
    detail::fill_bands(rep);
    return rep;
}

enum class PerturbationRegime { Equivalent, TrefoilOnly, TrefoilFig8, ComplexLocal, BeyondTube };

inline std::string to_string(PerturbationRegime r) {
    switch (r) {
        case PerturbationRegime::Equivalent: return "Equivalent";
        case PerturbationRegime::TrefoilOnly: return "TrefoilOnly";
        case PerturbationRegime::TrefoilFig8: return "TrefoilFig8";
        case PerturbationRegime::ComplexLocal: return "ComplexLocal";
        case PerturbationRegime::BeyondTube: return "BeyondTube";
    }
    return "?";
}

// Regime of a perturbation radius for an equilateral knot, by the theorem
// bands.  Intervals are half-open with the lower bound inclusive in the more
// permissive regime.
inline PerturbationRegime classify_radius(const PolygonalKnot& K, double r) {
    if (!is_equilateral(K, 1e-6)) throw NotEquilateral("classify_radius requires an equilateral knot");
    const double E = arclength(K) / K.size();
    const double R = thickness_radius(K);
    if (r > R) return PerturbationRegime::BeyondTube;
    const auto rep = threshold_report(E, R);
    if (r < rep.trefoil_band_lo) return PerturbationRegime::Equivalent;
    if (r < rep.trefoil_band_hi) return PerturbationRegime::TrefoilOnly;
    if (r < rep.tref_fig8_band_hi) return PerturbationRegime::TrefoilFig8;
    return PerturbationRegime::ComplexLocal;
}

}  // namespace polyknot
