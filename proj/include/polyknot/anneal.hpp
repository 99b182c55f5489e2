#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <vector>

#include "polyknot/polygon.hpp"
#include "polyknot/rng.hpp"
#include "polyknot/thickness.hpp"

namespace polyknot {

struct AnnealSchedule {
    double initial_temperature = 1.0;
    double cooling = 0.95;       // per-epoch factor, in (0,1)
    int moves_per_epoch = 200;
    int epochs = 50;
    double initial_amplitude = 0.5;  // max rotation angle, annealed with T
    std::uint64_t seed = 1;
};

struct AnnealRecord {
    int epoch = 0;
    double temperature = 0.0;
    double current = 0.0;
    double best = 0.0;
};

// Rigid rotation of the sub-chain strictly between v_i and v_j about the
// axis v_i -> v_j.  Edge lengths are preserved exactly.  Returns nullopt
// when the result is non-embedded or an intermediate sweep position would
// collide (the arc must not pass through another edge).
inline std::optional<PolygonalKnot> crankshaft_move(const PolygonalKnot& K, int i, int j,
                                                    double angle,
                                                    double sweep_step = M_PI / 256) {
    const int n = K.size();
    i = K.mod(i);
    j = K.mod(j);
    if (i == j) return std::nullopt;
    const Vec3 a = K.vertex(i);
    Vec3 axis = K.vertex(j) - a;
    const double axis_len = axis.norm();
    if (axis_len < 1e-15) return std::nullopt;
    axis = axis * (1.0 / axis_len);  // rotation is rigid only about a unit axis

    auto rotated = [&](double theta) {
        std::vector<Vec3> verts;
        verts.reserve(n);
        for (int k = 0; k < n; ++k) verts.push_back(K.vertex(k));
        for (int k = K.mod(i + 1); k != j; k = K.mod(k + 1))
            verts[k] = a + rotate_about_axis(verts[k] - a, axis, theta);
        return PolygonalKnot(std::move(verts));
    };

    const int steps = std::max(1, static_cast<int>(std::ceil(std::fabs(angle) / sweep_step)));
    for (int s = 1; s <= steps; ++s) {
        const PolygonalKnot Ks = rotated(angle * s / steps);
        if (!is_embedded(Ks, 1e-12)) return std::nullopt;
        if (s == steps) return Ks;
    }
    return std::nullopt;
}

// Metropolis annealing of ropelength over equilateral polygons using
// crankshaft moves.  Returns the best configuration seen.
inline PolygonalKnot anneal(const PolygonalKnot& K0, const AnnealSchedule& sched,
                            std::vector<AnnealRecord>* log = nullptr) {
    PolygonalKnot current = K0;
    double cur_rope = ropelength(current);
    PolygonalKnot best = current;
    double best_rope = cur_rope;
    double T = sched.initial_temperature;
    CounterRng rng(sched.seed, 0xa22ea1);
    const int n = K0.size();

    for (int epoch = 0; epoch < sched.epochs; ++epoch) {
        const double amplitude =
            sched.initial_amplitude * (T / sched.initial_temperature);
        for (int m = 0; m < sched.moves_per_epoch; ++m) {
            const int i = static_cast<int>(rng.below(static_cast<std::uint64_t>(n)));
            const int span = 2 + static_cast<int>(rng.below(static_cast<std::uint64_t>(n - 3)));
            const int j = (i + span) % n;
            const double angle = (2.0 * rng.next_double() - 1.0) * amplitude;
            auto moved = crankshaft_move(current, i, j, angle);
            if (!moved) continue;
            double rope;
            try {
                rope = ropelength(*moved);
            } catch (const DomainError&) {
                continue;
            }
            const double delta = rope - cur_rope;
            if (delta <= 0.0 || rng.next_double() < std::exp(-delta / T)) {
                current = std::move(*moved);
                cur_rope = rope;
                if (cur_rope < best_rope) {
                    best = current;
                    best_rope = cur_rope;
                }
            }
        }
        if (log) log->push_back({epoch, T, cur_rope, best_rope});
        T *= sched.cooling;
    }

    // Zero-temperature quench: greedy descent from the best configuration
    // with a geometrically shrinking amplitude.  The Metropolis phase finds
    // the right basin but keeps accepting uphill moves; this polishes the
    // final few percent.  Only improvements are accepted, so `best` can
    // only get better and the knot class is unchanged (every accepted move
    // is a sweep-checked embedded crankshaft).
    current = best;
    cur_rope = best_rope;
    double amp = sched.initial_amplitude / 3.0;
    CounterRng qrng(sched.seed, 0x9e3779b9);
    for (int epoch = 0; epoch < 20; ++epoch) {
        for (int m = 0; m < sched.moves_per_epoch; ++m) {
            const int i = static_cast<int>(qrng.below(static_cast<std::uint64_t>(n)));
            const int span = 2 + static_cast<int>(qrng.below(static_cast<std::uint64_t>(n - 3)));
            const int j = (i + span) % n;
            const double angle = (2.0 * qrng.next_double() - 1.0) * amp;
            auto moved = crankshaft_move(current, i, j, angle);
            if (!moved) continue;
            double rope;
            try {
                rope = ropelength(*moved);
            } catch (const DomainError&) {
                continue;
            }
            if (rope < cur_rope) {
                current = std::move(*moved);
                cur_rope = rope;
            }
        }
        amp *= 0.7;
    }
    if (cur_rope < best_rope) best = current;
    return best;
}

}  // namespace polyknot
