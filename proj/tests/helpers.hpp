#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "polyknot/anneal.hpp"
#include "polyknot/montecarlo.hpp"
#include "polyknot/polygon.hpp"
#include "polyknot/rng.hpp"

namespace testutil {

using namespace polyknot;

// Random embedded polygon: a regular n-gon with vertices displaced by a
// fraction of its edge length, retried until comfortably embedded.
inline PolygonalKnot random_embedded_polygon(int n, std::uint64_t seed,
                                             double amplitude_frac = 0.25) {
    const double edge = 2.0 * std::sin(M_PI / n);
    for (std::uint64_t attempt = 0;; ++attempt) {
        CounterRng rng(seed, attempt);
        const PolygonalKnot base = regular_ngon(n, 1.0);
        std::vector<Vec3> v;
        for (int i = 0; i < n; ++i)
            v.push_back(base.vertex(i) + rng.in_ball(amplitude_frac * edge));
        PolygonalKnot K(std::move(v));
        if (md_witness(K).dist > 0.05 * edge) return K;
    }
}

// Random equilateral unknot: crankshaft-crumple a regular n-gon.  Moves are
// exactly edge-preserving and embeddedness-guarded, so the result stays an
// equilateral unknot.
inline PolygonalKnot random_equilateral_unknot(int n, std::uint64_t seed, int moves = 60) {
    PolygonalKnot K = regular_ngon(n, 1.0);
    CounterRng rng(seed, 0xc0);
    int done = 0;
    while (done < moves) {
        const int i = static_cast<int>(rng.below(n));
        const int span = 2 + static_cast<int>(rng.below(n - 3));
        const double angle = rng.uniform(-1.2, 1.2);
        auto moved = crankshaft_move(K, i, (i + span) % n, angle);
        if (moved) {
            K = std::move(*moved);
            ++done;
        }
    }
    return K;
}

// Dense-grid oracle for the critical self-distances.  Samples the polygon
// uniformly and classifies grid points as turning points of the pairwise
// distance function via their immediate neighbors.
struct GridSelfDistances {
    double dcsd = std::numeric_limits<double>::infinity();
    double scsd = std::numeric_limits<double>::infinity();
};

inline GridSelfDistances grid_self_distance_oracle(const PolygonalKnot& K,
                                                   int samples_per_edge) {
    const int n = K.size();
    const int total = n * samples_per_edge;
    std::vector<Vec3> pts(total);
    std::vector<int> edge_of(total);
    for (int e = 0; e < n; ++e) {
        for (int s = 0; s < samples_per_edge; ++s) {
            const double t = static_cast<double>(s) / samples_per_edge;
            pts[e * samples_per_edge + s] = K.edge_start(e) + K.edge_vector(e) * t;
            edge_of[e * samples_per_edge + s] = e;
        }
    }
    auto dist = [&](int a, int b) { return distance(pts[a], pts[b]); };
    auto wrap = [&](int a) { return (a % total + total) % total; };
    const double tie = 1e-13;

    GridSelfDistances out;
    for (int a = 0; a < total; ++a) {
        for (int b = a + 1; b < total; ++b) {
            const double d = dist(a, b);
            const double dbm = dist(a, wrap(b - 1)), dbp = dist(a, wrap(b + 1));
            const bool b_min = dbm >= d - tie && dbp >= d - tie;
            const bool b_max = dbm <= d + tie && dbp <= d + tie;
            if (!(b_min || b_max)) continue;
            const double dam = dist(wrap(a - 1), b), dap = dist(wrap(a + 1), b);
            const bool a_min = dam >= d - tie && dap >= d - tie;
            const bool a_max = dam <= d + tie && dap <= d + tie;
            if ((a_min || a_max) && d < out.dcsd) out.dcsd = d;
        }
    }

    // scsd: grid only over the free point x; the local minima of d_x are
    // found exactly (per-edge feet are exact, vertex minima classified by
    // exact one-sided derivatives), then the winning x is refined by golden
    // section so boundary infima are resolved far below the grid spacing.
    auto local_min_dist = [&](int ex, const Vec3& x) {
        double best = std::numeric_limits<double>::infinity();
        for (int e = 0; e < n; ++e) {
            if (e == ex || K.edges_adjacent(e, ex)) continue;
            const Vec3 b0 = K.edge_start(e);
            const Vec3 d2 = K.edge_vector(e);
            const double t = dot(x - b0, d2) / d2.norm2();
            if (t > 0.0 && t < 1.0)
                best = std::min(best, distance(x, b0 + d2 * t));
        }
        for (int i = 0; i < n; ++i) {
            const int ein = K.mod(i - 1);
            if ((ein == ex || K.edges_adjacent(ein, ex)) &&
                (i == ex || K.edges_adjacent(i, ex)))
                continue;
            const Vec3 v = K.vertex(i);
            const double d = distance(x, v);
            if (d <= 0.0) continue;
            const double s_in = dot(v - x, K.edge_dir(ein)) / d;
            const double s_out = dot(v - x, K.edge_dir(i)) / d;
            if (s_in <= 1e-13 && s_out >= -1e-13) best = std::min(best, d);
        }
        return best;
    };
    int best_edge = 0;
    double best_t = 0.0;
    for (int e = 0; e < n; ++e) {
        for (int s = 0; s <= samples_per_edge; ++s) {
            const double t = static_cast<double>(s) / samples_per_edge;
            const double g =
                local_min_dist(e, K.edge_start(e) + K.edge_vector(e) * t);
            if (g < out.scsd) {
                out.scsd = g;
                best_edge = e;
                best_t = t;
            }
        }
    }
    if (out.scsd < std::numeric_limits<double>::infinity()) {
        double lo = std::max(0.0, best_t - 1.0 / samples_per_edge);
        double hi = std::min(1.0, best_t + 1.0 / samples_per_edge);
        auto g = [&](double t) {
            return local_min_dist(best_edge,
                                  K.edge_start(best_edge) + K.edge_vector(best_edge) * t);
        };
        const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
        double x1 = hi - gr * (hi - lo), x2 = lo + gr * (hi - lo);
        double f1 = g(x1), f2 = g(x2);
        for (int it = 0; it < 120; ++it) {
            if (f1 <= f2) {
                hi = x2;
                x2 = x1;
                f2 = f1;
                x1 = hi - gr * (hi - lo);
                f1 = g(x1);
            } else {
                lo = x1;
                x1 = x2;
                f1 = f2;
                x2 = lo + gr * (hi - lo);
                f2 = g(x2);
            }
        }
        out.scsd = std::min(out.scsd, std::min(f1, f2));
    }
    return out;
}

}  // namespace testutil
